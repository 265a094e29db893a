#pragma once

// Dense complex linear algebra shared by every other header: PSD square
// roots, rank-revealing range bases, norms, spectral radii and subspace
// comparison, plus a couple of matrix-free helpers for operators on large
// truncated Hardy spaces.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace dcmodel {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  NumericalFailure,
  DimensionMismatch,
  FactorNotPure,
  FactorNotContractive,
  PointOutsidePolydisc,
  DegreeCapExceeded,
  ResolventSingular,
  MarginTooLarge,
  NotProjection,
  NotCommuting,
  ProjectionDriftExceedsTolerance,
  NotCoinvariant,
  IoError,
  ParseError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::FactorNotPure: return "FactorNotPure";
    case ErrorKind::FactorNotContractive: return "FactorNotContractive";
    case ErrorKind::PointOutsidePolydisc: return "PointOutsidePolydisc";
    case ErrorKind::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorKind::ResolventSingular: return "ResolventSingular";
    case ErrorKind::MarginTooLarge: return "MarginTooLarge";
    case ErrorKind::NotProjection: return "NotProjection";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::ProjectionDriftExceedsTolerance: return "ProjectionDriftExceedsTolerance";
    case ErrorKind::NotCoinvariant: return "NotCoinvariant";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Library error. `value()` carries the offending quantity when one exists
/// (an eigenvalue, an achieved isometry defect, a residual).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<double> value = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  std::optional<double> value_;
};

struct ToleranceConfig {
  double rank_tol = 1e-10;   // relative singular-value cutoff
  double check_tol = 1e-9;   // identity residual acceptance
  double tail_tol = 1e-6;    // truncation tail acceptance

  void validate() const {
    if (!(rank_tol > 0.0) || !(check_tol > 0.0) || !(tail_tol > 0.0)) {
      throw Error(ErrorKind::NumericalFailure, "tolerances must be strictly positive");
    }
  }
};

inline ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

inline bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " must be square, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
}

/// Largest singular value; zero for empty matrices. Taken from the Gram
/// matrix of the smaller side, accurate to about eps * |M|.
inline double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (!all_finite(m)) throw Error(ErrorKind::NumericalFailure, "non-finite entries in operator_norm");
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  const ComplexMatrix gram = m.rows() < m.cols() ? ComplexMatrix(m * m.adjoint()) : ComplexMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "Hermitian eigensolver failed");
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

inline double spectral_radius(const ComplexMatrix& m) {
  require_square(m, "spectral_radius input");
  if (m.size() == 0) return 0.0;
  if (!all_finite(m)) throw Error(ErrorKind::NumericalFailure, "non-finite entries in spectral_radius");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// Rotates `v` in place so its first significant entry is real positive.
inline void normalize_phase(Eigen::Ref<ComplexVector> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > 1e-8 * scale) {
      v *= std::conj(v(i)) / a;
      return;
    }
  }
}

/// PSD square root of a Hermitian matrix. Eigenvalues within rank_tol*(1+|M|)
/// of zero are set to zero first, so round-off does not turn into rank.
inline ComplexMatrix hermitian_psd_sqrt(const ComplexMatrix& m, const ToleranceConfig& cfg = {}) {
  require_square(m, "hermitian_psd_sqrt input");
  if (m.size() == 0) return m;
  if (!all_finite(m)) throw Error(ErrorKind::NumericalFailure, "non-finite entries in hermitian_psd_sqrt");
  const double scale = 1.0 + operator_norm(m);
  const double asym = operator_norm(m - m.adjoint());
  if (asym > cfg.check_tol * scale) {
    throw Error(ErrorKind::NotHermitian, "asymmetry " + std::to_string(asym), asym);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "Hermitian eigensolver failed");
  RealVector ev = es.eigenvalues();
  if (ev(0) < -cfg.rank_tol * scale) {
    throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(ev(0)), ev(0));
  }
  const double floor = cfg.rank_tol * scale;
  RealVector root = ev.unaryExpr([floor](double x) { return x <= floor ? 0.0 : std::sqrt(x); });
  const ComplexMatrix& u = es.eigenvectors();
  ComplexMatrix r = u * root.cast<Complex>().asDiagonal() * u.adjoint();
  return hermitian_part(r);
}

/// Orthonormal basis (as columns) of the numerical range of `m`. Singular
/// values below rank_tol * sigma_max are dropped. Columns come in descending
/// singular-value order, each phase-normalized.
inline ComplexMatrix orthonormal_range_basis(const ComplexMatrix& m, const ToleranceConfig& cfg = {}) {
  if (m.size() == 0) return ComplexMatrix(m.rows(), 0);
  if (!all_finite(m)) throw Error(ErrorKind::NumericalFailure, "non-finite entries in range basis");
  // Jacobi rather than divide-and-conquer: exact projections have heavily
  // repeated singular values, which BDCSVD in Eigen 3.4.0 mishandles.
  Eigen::JacobiSVD<ComplexMatrix, Eigen::ColPivHouseholderQRPreconditioner> svd(m, Eigen::ComputeThinU);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "SVD failed");
  const RealVector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return ComplexMatrix(m.rows(), 0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cfg.rank_tol * s(0)) ++rank;
  ComplexMatrix basis = svd.matrixU().leftCols(rank);
  for (Index j = 0; j < rank; ++j) normalize_phase(basis.col(j));
  return basis;
}

/// ||A A* - B B*|| without forming the ambient-size matrices.
inline double gram_difference_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "ambient dimensions differ");
  }
  const Index ka = a.cols();
  const Index kb = b.cols();
  if (ka + kb == 0) return 0.0;
  const Index n = a.rows();
  if (ka + kb >= n) {
    return operator_norm(a * a.adjoint() - b * b.adjoint());
  }
  // P_A - P_B lives on span[A B]; reduce to a (ka+kb)-square Hermitian problem.
  ComplexMatrix c(n, ka + kb);
  c << a, b;
  Eigen::HouseholderQR<ComplexMatrix> qr(c);
  ComplexMatrix r = qr.matrixQR().topRows(ka + kb).triangularView<Eigen::Upper>();
  RealVector signs(ka + kb);
  signs.head(ka).setOnes();
  signs.tail(kb).setConstant(-1.0);
  ComplexMatrix h = r * signs.cast<Complex>().asDiagonal() * r.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// ||P_A - P_B|| for orthonormal column families in a common ambient space.
inline double subspace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "subspace_distance ambient dimensions differ");
  }
  return gram_difference_norm(a, b);
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexMatrix random_gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) * std::sqrt(0.5);
    }
  }
  return g;
}

/// A linear operator given by its action on a block of column vectors.
using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

struct MatrixFreeOptions {
  Index dense_limit = 1200;  // materialize and take an exact SVD up to this size
  Index block = 4;
  int iterations = 20;
  std::uint64_t seed = 0x5eedULL;
};

/// Norm of a normal (e.g. Hermitian or skew-Hermitian) operator on C^dim.
/// Exact below `dense_limit`; above it a block power iteration, which
/// returns a lower estimate that converges to the largest |eigenvalue|.
inline double normal_operator_norm(const LinearMap& apply, Index dim, const MatrixFreeOptions& opt = {}) {
  if (dim == 0) return 0.0;
  if (dim <= opt.dense_limit) {
    return operator_norm(apply(identity(dim)));
  }
  std::mt19937_64 rng(opt.seed);
  ComplexMatrix x = random_gaussian(dim, opt.block, rng);
  double estimate = 0.0;
  for (int it = 0; it < opt.iterations; ++it) {
    Eigen::HouseholderQR<ComplexMatrix> qr(x);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, opt.block);
    x = apply(q);
    estimate = operator_norm(x);
    if (estimate == 0.0) return 0.0;
  }
  return estimate;
}

/// Orthonormal basis of the eigenspace (eigenvalues > 1/2) of a Hermitian
/// operator whose spectrum clusters near 0 and 1, found by a randomized range
/// finder with Rayleigh-Ritz. The sketch grows until at least one Ritz value
/// falls below 1/2, which certifies that the sketch is wider than the range.
inline ComplexMatrix projection_range(const LinearMap& apply, Index dim, Index rank_hint,
                                      const ToleranceConfig& cfg = {}, std::uint64_t seed = 0xa11ceULL) {
  if (dim == 0) return ComplexMatrix(0, 0);
  std::mt19937_64 rng(seed);
  Index width = std::min<Index>(dim, std::max<Index>(rank_hint, 0) + 8);
  for (;;) {
    ComplexMatrix sketch = apply(apply(random_gaussian(dim, width, rng)));
    ComplexMatrix q = orthonormal_range_basis(sketch, cfg);
    if (q.cols() == 0) return ComplexMatrix(dim, 0);
    ComplexMatrix h = hermitian_part(q.adjoint() * apply(q));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const RealVector& ev = es.eigenvalues();
    Index keep = 0;
    for (Index j = 0; j < ev.size(); ++j) keep += ev(j) > 0.5 ? 1 : 0;
    if (keep < width || width == dim) {
      ComplexMatrix basis = q * es.eigenvectors().rightCols(keep);
      return orthonormal_range_basis(basis, cfg);
    }
    width = std::min<Index>(dim, 2 * width);
  }
}

}  // namespace dcmodel
