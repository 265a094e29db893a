#pragma once

// Tuple files: {"n": int, "dim": int, "matrices": [[[ [re, im], ... ], ...], ...], "metadata": {...}}

#include "dcmodel/tuples.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dcmodel {

using Json = nlohmann::ordered_json;

struct TupleFile {
  std::size_t n = 0;
  Index dim = 0;
  std::vector<ComplexMatrix> matrices;
  Json metadata = Json::object();

  ContractionTuple tuple() const { return ContractionTuple(matrices); }
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

inline Complex parse_entry(const Json& e, const std::string& where) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    parse_fail(where + ": entries must be [re, im] pairs");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace detail

inline TupleFile tuple_from_json(const Json& j) {
  if (!j.is_object()) detail::parse_fail("top level must be an object");
  for (const char* key : {"n", "dim", "matrices"}) {
    if (!j.contains(key)) detail::parse_fail(std::string("missing key \"") + key + "\"");
  }
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) detail::parse_fail("\"n\" must be a positive integer");
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) detail::parse_fail("\"dim\" must be a positive integer");
  TupleFile tf;
  tf.n = j["n"].get<std::size_t>();
  tf.dim = j["dim"].get<Index>();
  const Json& mats = j["matrices"];
  if (!mats.is_array() || mats.size() != tf.n) {
    detail::parse_fail("\"matrices\" must be an array of length n = " + std::to_string(tf.n));
  }
  for (std::size_t m = 0; m < mats.size(); ++m) {
    const std::string where = "matrix " + std::to_string(m + 1);
    const Json& rows = mats[m];
    if (!rows.is_array() || static_cast<Index>(rows.size()) != tf.dim) {
      detail::parse_fail(where + ": expected " + std::to_string(tf.dim) + " rows");
    }
    ComplexMatrix a(tf.dim, tf.dim);
    for (Index r = 0; r < tf.dim; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != tf.dim) {
        detail::parse_fail(where + ", row " + std::to_string(r + 1) + ": ragged row");
      }
      for (Index c = 0; c < tf.dim; ++c) {
        a(r, c) = detail::parse_entry(row[static_cast<std::size_t>(c)], where);
      }
    }
    if (!all_finite(a)) detail::parse_fail(where + ": non-finite entry");
    tf.matrices.push_back(std::move(a));
  }
  if (j.contains("metadata")) {
    if (!j["metadata"].is_object()) detail::parse_fail("\"metadata\" must be an object");
    tf.metadata = j["metadata"];
  }
  return tf;
}

inline Json tuple_to_json(const TupleFile& tf) {
  Json j;
  j["n"] = tf.matrices.size();
  j["dim"] = tf.matrices.empty() ? 0 : tf.matrices.front().rows();
  Json mats = Json::array();
  for (const auto& a : tf.matrices) {
    Json rows = Json::array();
    for (Index r = 0; r < a.rows(); ++r) {
      Json row = Json::array();
      for (Index c = 0; c < a.cols(); ++c) row.push_back(Json::array({a(r, c).real(), a(r, c).imag()}));
      rows.push_back(std::move(row));
    }
    mats.push_back(std::move(rows));
  }
  j["matrices"] = std::move(mats);
  j["metadata"] = tf.metadata;
  return j;
}

inline TupleFile read_tuple_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  return tuple_from_json(j);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

inline void write_tuple_file(const std::string& path, const TupleFile& tf) {
  write_text_file(path, tuple_to_json(tf).dump(2) + "\n");
}

}  // namespace dcmodel
