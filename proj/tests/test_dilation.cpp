#include "dcmodel/dilation.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dcmodel;

namespace {

ComplexMatrix scalar(double a) { return ComplexMatrix::Constant(1, 1, a); }

DilationMap dilate(const ContractionTuple& t, int d) { return build_dilation(t, defect_operators(t), d); }

}  // namespace

TEST(Dilation, ScalarCoefficientsAreGeometric) {
  const ContractionTuple t({scalar(0.6)});
  const DilationMap l = dilate(t, 2);
  ASSERT_EQ(l.matrix.rows(), 3);
  EXPECT_NEAR(std::abs(l.matrix(0, 0)), 0.8, 1e-14);
  EXPECT_NEAR(std::abs(l.matrix(1, 0)), 0.48, 1e-14);
  EXPECT_NEAR(std::abs(l.matrix(2, 0)), 0.288, 1e-14);
  EXPECT_NEAR(isometry_defect(l), 0.046656, 1e-14);
}

TEST(Dilation, ScalarPairCoefficients) {
  const double a = 0.5, b = 0.3;
  const auto t = make_tensor_tuple({scalar(a), scalar(b)});
  const DilationMap l = dilate(t, 5);
  const double c = std::sqrt((1 - a * a) * (1 - b * b));
  for (Index p = 0; p < l.space.num_indices(); ++p) {
    const auto& k = l.space.index_at(p);
    EXPECT_NEAR(std::abs(l.matrix(p, 0)), c * std::pow(a, k[0]) * std::pow(b, k[1]), 1e-14);
  }
  const double tail = 1.0 - (1.0 - std::pow(a, 12)) * (1.0 - std::pow(b, 12));
  EXPECT_NEAR(isometry_defect(l), tail, 1e-14);
}

TEST(Dilation, ZeroTupleIsExactAtEveryDegree) {
  const ContractionTuple t({ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)});
  for (int d : {0, 1, 3}) {
    const DilationMap l = dilate(t, d);
    EXPECT_EQ(l.defects.rank(), 2);
    EXPECT_LT(isometry_defect(l), 1e-14);
    EXPECT_LT(intertwining_residual(l, 0), 1e-14);
    EXPECT_LT(intertwining_residual(l, 1), 1e-14);
  }
}

TEST(Dilation, IntertwiningResidualSitsOnTheTopLayer) {
  const ContractionTuple t({scalar(0.6)});
  const DilationMap l = dilate(t, 10);
  EXPECT_NEAR(intertwining_residual(l, 0), 0.8 * std::pow(0.6, 11), 1e-14);
  // Below the top layer both sides agree exactly.
  const ComplexMatrix lhs = l.matrix * t[0].adjoint();
  const ComplexMatrix rhs = ComplexMatrix(coshift_matrix(l.space, 0)) * l.matrix;
  EXPECT_LT((lhs - rhs).topRows(10).norm(), 1e-15);
}

TEST(Dilation, TensorPairReachesTailTolerance) {
  const auto t = make_tensor_tuple({make_random_pure_contraction(2, 0.5, 3), make_random_pure_contraction(2, 0.5, 4)});
  const DilationMap l = dilate(t, 40);
  EXPECT_LT(isometry_defect(l), 1e-6);
  EXPECT_LT(truncation_error(l), 1e-6);
  EXPECT_LT(minimality_check(l), 1e-9);
  for (double r : compressed_tuple_residual(l)) EXPECT_LT(r, 1e-6);
}

TEST(Dilation, AdjointOnKernelsScalar) {
  const ContractionTuple t({scalar(0.6)});
  const DilationMap l = dilate(t, 80);
  Point w(1);
  w << Complex(0.3, 0.4);
  ComplexVector eta(1);
  eta << 1.0;
  // L*(S_w) = (1 - conj(w) 0.6)^{-1} 0.8
  EXPECT_LT(adjoint_on_kernels_check(l, {{w, eta}}), 1e-12);
  const Complex direct = (l.matrix.adjoint() * kernel_vector(l.space, w, eta))(0);
  EXPECT_NEAR(std::abs(direct - 0.8 / (1.0 - std::conj(w(0)) * 0.6)), 0.0, 1e-12);
}

TEST(Dilation, AdaptiveDegreeMeetsTolerance) {
  const auto t = make_tensor_tuple({make_random_pure_contraction(2, 0.4, 5), make_random_pure_contraction(1, 0.3, 6)});
  const auto defects = defect_operators(t);
  const DilationMap l = build_dilation_adaptive(t, defects);
  EXPECT_LE(truncation_error(l), 1e-6);
  EXPECT_GE(l.degree(), 8);
  // Doubling: the previous degree did not meet the tolerance.
  if (l.degree() > 8) {
    EXPECT_GT(truncation_error(build_dilation(t, defects, l.degree() / 2)), 1e-6);
  }
}

TEST(Dilation, DegreeCapExceeded) {
  const ContractionTuple t({scalar(0.99)});
  try {
    build_dilation_adaptive(t, defect_operators(t), {}, AdaptiveDegree{8, 64, 3e7});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegreeCapExceeded);
    ASSERT_TRUE(e.value().has_value());
    EXPECT_GT(*e.value(), 1e-6);
  }
}

TEST(Dilation, IsometryDefectDecreasesWithDegree) {
  const ContractionTuple t({make_random_pure_contraction(3, 0.7, 8)});
  const auto defects = defect_operators(t);
  double previous = 2.0;
  for (int d : {2, 4, 8, 16, 32}) {
    const double now = isometry_defect(build_dilation(t, defects, d));
    EXPECT_LT(now, previous);
    previous = now;
  }
}

TEST(Dilation, MinimalityOfRankDeficientDefect) {
  ComplexMatrix j = ComplexMatrix::Zero(2, 2);
  j(0, 1) = 1.0;
  const ContractionTuple t({j});
  const DilationMap l = dilate(t, 3);
  EXPECT_EQ(l.defects.rank(), 1);
  EXPECT_LT(minimality_check(l), 1e-12);
  EXPECT_LT(isometry_defect(l), 1e-14);
  EXPECT_LT(compressed_tuple_residual(l)[0], 1e-14);
}

TEST(Dilation, NegativeDegreeRejected) {
  const ContractionTuple t({scalar(0.5)});
  EXPECT_THROW(dilate(t, -1), Error);
}
