#pragma once

#include "dcmodel/matrixcore.hpp"
#include "dcmodel/tuples.hpp"
#include "dcmodel/hardy.hpp"
#include "dcmodel/dilation.hpp"
#include "dcmodel/model.hpp"
#include "dcmodel/blh.hpp"
#include "dcmodel/io.hpp"
#include "dcmodel/suite.hpp"
