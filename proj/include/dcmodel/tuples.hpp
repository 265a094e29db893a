#pragma once

#include "dcmodel/matrixcore.hpp"

#include <utility>
#include <vector>

namespace dcmodel {

/// n square matrices acting on a common space of dimension `dim`.
class ContractionTuple {
 public:
  ContractionTuple() = default;

  explicit ContractionTuple(std::vector<ComplexMatrix> matrices) : ops_(std::move(matrices)) {
    if (ops_.empty()) throw Error(ErrorKind::DimensionMismatch, "a tuple needs at least one operator");
    const Index d = ops_.front().rows();
    for (const auto& t : ops_) {
      if (t.rows() != d || t.cols() != d) {
        throw Error(ErrorKind::DimensionMismatch, "tuple matrices must all be square of the same size");
      }
      if (!all_finite(t)) throw Error(ErrorKind::NumericalFailure, "tuple matrix has non-finite entries");
    }
  }

  std::size_t size() const noexcept { return ops_.size(); }
  Index dim() const noexcept { return ops_.empty() ? 0 : ops_.front().rows(); }
  const ComplexMatrix& operator[](std::size_t i) const { return ops_.at(i); }
  const std::vector<ComplexMatrix>& matrices() const noexcept { return ops_; }

 private:
  std::vector<ComplexMatrix> ops_;
};

struct PairResidual {
  std::size_t i = 0;
  std::size_t j = 0;
  double residual = 0.0;
  bool passed = true;
};

struct ValidationReport {
  std::vector<double> norms;
  std::vector<bool> contractive;
  std::vector<PairResidual> commuting;         // i < j
  std::vector<PairResidual> doubly_commuting;  // i < j; the (j,i) residual is its adjoint
  std::vector<double> spectral_radii;
  std::vector<bool> pure;

  bool all_contractive() const { return std::all_of(contractive.begin(), contractive.end(), [](bool b) { return b; }); }
  bool all_pure() const { return std::all_of(pure.begin(), pure.end(), [](bool b) { return b; }); }
  bool all_commuting() const {
    return std::all_of(commuting.begin(), commuting.end(), [](const PairResidual& p) { return p.passed; });
  }
  bool all_doubly_commuting() const {
    return std::all_of(doubly_commuting.begin(), doubly_commuting.end(),
                       [](const PairResidual& p) { return p.passed; });
  }
  bool accepted() const { return all_contractive() && all_commuting() && all_doubly_commuting() && all_pure(); }
};

inline ValidationReport validate_tuple(const ContractionTuple& t, const ToleranceConfig& cfg = {}) {
  if (t.size() == 0) throw Error(ErrorKind::DimensionMismatch, "empty tuple");
  ValidationReport rep;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double nrm = operator_norm(t[i]);
    rep.norms.push_back(nrm);
    rep.contractive.push_back(nrm <= 1.0 + cfg.check_tol);
    const double rho = spectral_radius(t[i]);
    rep.spectral_radii.push_back(rho);
    rep.pure.push_back(rho < 1.0 - cfg.rank_tol);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      const double c = operator_norm(t[i] * t[j] - t[j] * t[i]);
      rep.commuting.push_back({i, j, c, c <= cfg.check_tol});
      const double dc = operator_norm(t[i] * t[j].adjoint() - t[j].adjoint() * t[i]);
      rep.doubly_commuting.push_back({i, j, dc, dc <= cfg.check_tol});
    }
  }
  return rep;
}

/// Defect operators of one contraction and orthonormal bases of their ranges.
struct OperatorDefect {
  ComplexMatrix defect;            // D_T = (I - T*T)^{1/2}
  ComplexMatrix defect_star;       // D_{T*} = (I - TT*)^{1/2}
  ComplexMatrix basis;             // columns span ran D_T
  ComplexMatrix basis_star;        // columns span ran D_{T*}
};

inline OperatorDefect operator_defect(const ComplexMatrix& t, const ToleranceConfig& cfg = {}) {
  require_square(t, "contraction");
  const ComplexMatrix id = identity(t.rows());
  OperatorDefect d;
  d.defect = hermitian_psd_sqrt(id - t.adjoint() * t, cfg);
  d.defect_star = hermitian_psd_sqrt(id - t * t.adjoint(), cfg);
  d.basis = orthonormal_range_basis(d.defect, cfg);
  d.basis_star = orthonormal_range_basis(d.defect_star, cfg);
  return d;
}

struct DefectData {
  ComplexMatrix big_defect;        // D_{T*} as the PSD root of prod (I - T_i T_i*)
  ComplexMatrix big_defect_basis;  // orthonormal basis of its range, columns
  std::vector<OperatorDefect> per_op;
  double route_residual = 0.0;     // |prod_i D_{T_i*} - big_defect|
  double inclusion_residual = 0.0; // max_i |(I - P_{D_{T_i*}}) big_defect_basis|

  Index rank() const noexcept { return big_defect_basis.cols(); }
  Index dim() const noexcept { return big_defect.rows(); }
};

inline DefectData defect_operators(const ContractionTuple& t, const ToleranceConfig& cfg = {}) {
  DefectData out;
  const Index m = t.dim();
  ComplexMatrix product_of_roots = identity(m);
  ComplexMatrix product_of_squares = identity(m);
  for (std::size_t i = 0; i < t.size(); ++i) {
    out.per_op.push_back(operator_defect(t[i], cfg));
    product_of_roots = product_of_roots * out.per_op.back().defect_star;
    product_of_squares = product_of_squares * (identity(m) - t[i] * t[i].adjoint());
  }
  out.big_defect = hermitian_psd_sqrt(product_of_squares, cfg);
  out.route_residual = operator_norm(product_of_roots - out.big_defect);
  out.big_defect_basis = orthonormal_range_basis(out.big_defect, cfg);
  for (const auto& d : out.per_op) {
    const ComplexMatrix& u = d.basis_star;
    const ComplexMatrix& v = out.big_defect_basis;
    out.inclusion_residual = std::max(out.inclusion_residual, operator_norm(v - u * (u.adjoint() * v)));
  }
  return out;
}

/// Max residual of T_i D_{T_j*} = D_{T_j*} T_i (i != j) and
/// D_{T_i*} D_{T_j*} = D_{T_j*} D_{T_i*}.
struct DefectCommutation {
  double residual = 0.0;
  bool passed = true;
};

inline DefectCommutation defect_commutation_check(const ContractionTuple& t, const ToleranceConfig& cfg = {}) {
  std::vector<ComplexMatrix> roots;
  for (std::size_t i = 0; i < t.size(); ++i) {
    roots.push_back(hermitian_psd_sqrt(identity(t.dim()) - t[i] * t[i].adjoint(), cfg));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (i == j) continue;
      worst = std::max(worst, operator_norm(t[i] * roots[j] - roots[j] * t[i]));
      if (i < j) worst = std::max(worst, operator_norm(roots[i] * roots[j] - roots[j] * roots[i]));
    }
  }
  return {worst, worst <= cfg.check_tol};
}

/// T_i = I (x) ... (x) A_i (x) ... (x) I, factor 1 slowest-varying.
inline ContractionTuple make_tensor_tuple(const std::vector<ComplexMatrix>& factors, const ToleranceConfig& cfg = {}) {
  if (factors.empty()) throw Error(ErrorKind::DimensionMismatch, "no factors");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    require_square(factors[i], "tensor factor");
    const double nrm = operator_norm(factors[i]);
    if (nrm > 1.0 + cfg.check_tol) {
      throw Error(ErrorKind::FactorNotContractive, "factor " + std::to_string(i + 1) + " has norm " + std::to_string(nrm), nrm);
    }
    const double rho = spectral_radius(factors[i]);
    if (!(rho < 1.0 - cfg.rank_tol)) {
      throw Error(ErrorKind::FactorNotPure, "factor " + std::to_string(i + 1) + " has spectral radius " + std::to_string(rho), rho);
    }
  }
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    ComplexMatrix acc = ComplexMatrix::Identity(1, 1);
    for (std::size_t j = 0; j < factors.size(); ++j) {
      acc = kron(acc, i == j ? factors[j] : identity(factors[j].rows()));
    }
    ops.push_back(std::move(acc));
  }
  return ContractionTuple(std::move(ops));
}

/// Complex Gaussian matrix rescaled to operator norm `radius`, so its spectral
/// radius is at most `radius`.
inline ComplexMatrix make_random_pure_contraction(Index dim, double radius, std::uint64_t seed) {
  if (!(radius > 0.0 && radius < 1.0)) {
    throw Error(ErrorKind::FactorNotPure, "radius must lie in (0,1)", radius);
  }
  std::mt19937_64 rng(seed);
  ComplexMatrix g = random_gaussian(dim, dim, rng);
  double nrm = operator_norm(g);
  while (nrm == 0.0) {
    g = random_gaussian(dim, dim, rng);
    nrm = operator_norm(g);
  }
  return g * (radius / nrm);
}

/// radius * (nilpotent Jordan block of the given order).
inline ComplexMatrix make_jordan_block(Index order, double radius) {
  ComplexMatrix j = ComplexMatrix::Zero(order, order);
  for (Index k = 0; k + 1 < order; ++k) j(k, k + 1) = radius;
  return j;
}

/// Haar-distributed unitary (QR of a Gaussian with the R-diagonal phases removed).
inline ComplexMatrix make_random_unitary(Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ComplexMatrix g = random_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Index k = 0; k < dim; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0.0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

/// U T_i U* for every i; joint unitary conjugation preserves every tuple property.
inline ContractionTuple conjugate_tuple(const ContractionTuple& t, const ComplexMatrix& u) {
  std::vector<ComplexMatrix> ops;
  for (const auto& m : t.matrices()) ops.push_back(u * m * u.adjoint());
  return ContractionTuple(std::move(ops));
}

}  // namespace dcmodel
