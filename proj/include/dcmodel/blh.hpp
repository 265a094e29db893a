#pragma once

// One-variable fibers of S_T, their wandering subspaces and inner functions,
// the reconstruction S_T = sum Phi_i H^2, and the rank-one co-invariant
// subspace round trip.

#include "dcmodel/model.hpp"

namespace dcmodel {

/// A one-variable subspace of C^{d+1} (x) C^r (the fiber of ran P_i).
struct InvariantSubspace {
  std::size_t variable = 0;
  int degree = 0;
  Index coeff_dim = 0;
  ComplexMatrix basis;  // orthonormal columns, (d+1)*coeff_dim rows
  bool empty = true;    // zero fiber: the zero-function alternative
  double reconstruction_residual = 0.0;  // tensor structure vs P_i on margin slices
  double shift_invariance_residual = 0.0;

  Index rank() const noexcept { return basis.cols(); }
};

/// Coordinates of the slice {k : k_j = a_j for j != var}, ordered by k_var then coefficient.
inline std::vector<Index> slice_coordinates(const TruncatedHardySpace& space, std::size_t var, const MultiIndex& fixed) {
  std::vector<Index> out;
  MultiIndex k = fixed;
  for (int t = 0; t <= space.degree(); ++t) {
    k[var] = t;
    const Index p = space.position(k);
    for (Index c = 0; c < space.coeff_dim(); ++c) out.push_back(space.offset(p, c));
  }
  return out;
}

namespace detail {

inline double shift_invariance(const ComplexMatrix& basis, int d, Index r, int margin) {
  if (basis.cols() == 0) return 0.0;
  const ComplexMatrix s = one_variable_shift(d, r);
  const Index keep = (d - margin + 1) * r;
  const ComplexMatrix proj = basis * basis.adjoint();
  const ComplexMatrix moved = s * proj.leftCols(keep);
  return operator_norm(moved - proj * moved);
}

}  // namespace detail

/// The k_j = 0 slice of ran P_i. Both P_i and the unrounded M_Theta M_Theta^*
/// act on (k_i, coefficient) only, so comparing I (x) P_fiber with the
/// unrounded operator on every margin slice reduces to one margin block.
inline InvariantSubspace fiber_extract(const ModelSpaces& ms, std::size_t i, const ToleranceConfig& cfg = {}) {
  const TruncatedHardySpace& space = ms.space;
  const int d = space.degree();
  const Index r = space.coeff_dim();
  const LocalOperator& p = ms.projections.at(i);
  InvariantSubspace out{i, d, r, {}, true, 0.0, 0.0};

  // The compression of P_i to the slice through the origin is its block.
  out.basis = orthonormal_range_basis(round_to_projection(p.block).first, cfg);
  out.empty = out.basis.cols() == 0;

  const Index keep = (d - ms.margin + 1) * r;
  const ComplexMatrix gap = ms.restricted.at(i).block - out.basis * out.basis.adjoint();
  out.reconstruction_residual = operator_norm(gap.topLeftCorner(keep, keep));
  out.shift_invariance_residual = detail::shift_invariance(out.basis, d, r, ms.margin);
  return out;
}

/// Orthonormal basis of W = S ⊖ zS. With P the projection onto S and s the
/// truncated shift, P - s P s* is the projection onto W up to top-layer
/// truncation; its eigenvectors above 1/2 are kept.
inline ComplexMatrix wandering_basis(const InvariantSubspace& fiber) {
  const Index len = (fiber.degree + 1) * fiber.coeff_dim;
  if (fiber.empty) return ComplexMatrix(len, 0);
  const ComplexMatrix s = one_variable_shift(fiber.degree, fiber.coeff_dim);
  const ComplexMatrix proj = fiber.basis * fiber.basis.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(proj - s * proj * s.adjoint()));
  Index keep = 0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) keep += es.eigenvalues()(k) > 0.5 ? 1 : 0;
  ComplexMatrix w = es.eigenvectors().rightCols(keep);
  for (Index c = 0; c < w.cols(); ++c) normalize_phase(w.col(c));
  return w;
}

/// Taylor coefficients of the one-variable inner function Phi_i.
struct InnerColumnSet {
  std::size_t variable = 0;
  Index inner_dim = 0;
  std::vector<ComplexMatrix> coefficients;  // d+1 blocks, each coeff_dim x inner_dim
  double isometry_drift = 0.0;              // |T_Phi* T_Phi - I| on margin layers

  Complex scalar(int m) const { return coefficients.at(static_cast<std::size_t>(m))(0, 0); }
};

inline InnerColumnSet inner_from_wandering(const ComplexMatrix& w, std::size_t variable, int d, Index r, int margin) {
  InnerColumnSet out{variable, w.cols(), {}, 0.0};
  if (w.rows() != (d + 1) * r) throw Error(ErrorKind::DimensionMismatch, "wandering basis has the wrong length");
  for (int m = 0; m <= d; ++m) out.coefficients.push_back(w.middleRows(m * r, r));
  if (out.inner_dim > 0) {
    const ComplexMatrix t = toeplitz_lower(out.coefficients, d, r, out.inner_dim);
    const Index keep = (d - margin + 1) * out.inner_dim;
    const ComplexMatrix gram = (t.adjoint() * t).topLeftCorner(keep, keep);
    out.isometry_drift = operator_norm(gram - identity(keep));
  }
  return out;
}

/// Projection onto the truncated span of Phi z^k (k <= cap) in one variable.
inline ComplexMatrix inner_range_projection(const InnerColumnSet& phi, int d, Index r, int cap, const ToleranceConfig& cfg = {}) {
  if (phi.inner_dim == 0) return ComplexMatrix::Zero((d + 1) * r, (d + 1) * r);
  const ComplexMatrix t = toeplitz_lower(phi.coefficients, d, r, phi.inner_dim);
  const ComplexMatrix gens = t.leftCols((cap + 1) * phi.inner_dim);
  const ComplexMatrix q = orthonormal_range_basis(gens, cfg);
  return q * q.adjoint();
}

inline std::vector<LocalOperator> inner_range_projections(const std::vector<InnerColumnSet>& inners,
                                                          const TruncatedHardySpace& space, int margin,
                                                          const ToleranceConfig& cfg = {}) {
  const int d = space.degree();
  const Index r = space.coeff_dim();
  std::vector<LocalOperator> pieces;
  for (const auto& phi : inners) {
    pieces.push_back(LocalOperator{phi.variable, inner_range_projection(phi, d, r, d - margin, cfg), r, r});
  }
  return pieces;
}

/// Distance on margin layers between sum_i Phi_i H^2 and ran P_S. The
/// generators of variable i are Phi_i z^k with k_i <= d - margin (higher ones
/// leave the margin layers untouched but are cut by the box); the union is
/// combined through I - prod (I - P_{A_i}).
inline double reconstruct_S_check(const std::vector<InnerColumnSet>& inners, const ModelSpaces& ms,
                                  const ToleranceConfig& cfg = {}, const MatrixFreeOptions& opt = {}) {
  const TruncatedHardySpace& space = ms.space;
  const std::vector<LocalOperator> pieces = inner_range_projections(inners, space, ms.margin, cfg);
  const auto rows = ms.margin_rows();
  LinearMap op = [&](const ComplexMatrix& x) -> ComplexMatrix {
    const ComplexMatrix full = embed_rows(x, rows, space.dim());
    const ComplexMatrix diff = apply_complement_product(pieces, space, full) - ms.apply_complement(full);
    return select_rows(diff, rows);
  };
  return normal_operator_norm(op, static_cast<Index>(rows.size()), opt);
}

/// Fibers, wandering subspaces and inner functions for every variable.
struct BlhResult {
  std::vector<InvariantSubspace> fibers;
  std::vector<InnerColumnSet> inners;
  double reconstruction = 0.0;
};

inline BlhResult run_blh(const ModelSpaces& ms, const ToleranceConfig& cfg = {}) {
  BlhResult out;
  for (std::size_t i = 0; i < ms.projections.size(); ++i) {
    out.fibers.push_back(fiber_extract(ms, i, cfg));
    const ComplexMatrix w = wandering_basis(out.fibers.back());
    out.inners.push_back(inner_from_wandering(w, i, ms.space.degree(), ms.space.coeff_dim(), ms.margin));
  }
  out.reconstruction = reconstruct_S_check(out.inners, ms, cfg);
  return out;
}

/// Outcome of the co-invariant subspace test for a scalar truncated H^2.
struct RankOneVerdict {
  std::vector<ComplexMatrix> compressions;  // C_i = P_Q M_{z_i}|_Q in the given basis
  double coinvariance_residual = 0.0;
  double commuting_residual = 0.0;
  double doubly_commuting_residual = 0.0;
  std::size_t violating_i = 0;  // worst pair for double commutativity
  std::size_t violating_j = 0;
  bool doubly_commuting = false;
  bool pure = false;
  Index defect_rank = -1;
  Index constants_rank = -1;
  std::vector<InnerColumnSet> thetas;
  double q_match = -1.0;           // ran L against Q
  double complement_match = -1.0;  // sum theta_i H^2 against Q-perp, margin layers
  double reconstruction = -1.0;
  double isometry_defect = -1.0;
};

inline RankOneVerdict rankone_corollary_check(const ComplexMatrix& q, const TruncatedHardySpace& space,
                                              const ToleranceConfig& cfg = {}, int margin = -1) {
  if (space.coeff_dim() != 1) throw Error(ErrorKind::DimensionMismatch, "co-invariant test needs scalar coefficients");
  if (q.rows() != space.dim()) throw Error(ErrorKind::DimensionMismatch, "basis length differs from the space dimension");
  if (q.cols() == 0) throw Error(ErrorKind::NotCoinvariant, "the zero subspace is not a proper co-invariant subspace");
  const ComplexMatrix basis = orthonormal_range_basis(q, cfg);
  if (basis.cols() != q.cols()) throw Error(ErrorKind::NumericalFailure, "co-invariant basis is rank deficient");
  const int d = space.degree();
  if (margin < 0) margin = default_margin(d);

  RankOneVerdict v;
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < space.variables(); ++i) {
    const SparseMatrix fwd = shift_matrix(space, i);
    const SparseMatrix back = coshift_matrix(space, i);
    const ComplexMatrix pulled = back * basis;
    v.coinvariance_residual = std::max(v.coinvariance_residual, operator_norm(pulled - basis * (basis.adjoint() * pulled)));
    const ComplexMatrix pushed = fwd * basis;
    ops.push_back(basis.adjoint() * pushed);
  }
  if (v.coinvariance_residual > cfg.check_tol) {
    throw Error(ErrorKind::NotCoinvariant, "subspace is not invariant under the adjoint shifts", v.coinvariance_residual);
  }
  v.compressions = ops;
  const ContractionTuple c(ops);
  const ValidationReport rep = validate_tuple(c, cfg);
  for (const auto& p : rep.commuting) v.commuting_residual = std::max(v.commuting_residual, p.residual);
  double worst = -1.0;
  for (const auto& p : rep.doubly_commuting) {
    if (p.residual > worst) {
      worst = p.residual;
      v.violating_i = p.i;
      v.violating_j = p.j;
    }
  }
  v.doubly_commuting_residual = std::max(worst, 0.0);
  v.doubly_commuting = rep.all_commuting() && rep.all_doubly_commuting();
  v.pure = rep.all_pure();
  if (!v.doubly_commuting || !v.pure) return v;

  const DefectData defects = defect_operators(c, cfg);
  v.defect_rank = defects.rank();
  const SparseMatrix p0 = constants_projection(space);
  const ComplexMatrix at_constants = basis.adjoint() * (p0 * basis);
  v.constants_rank = orthonormal_range_basis(at_constants, cfg).cols();

  const DilationMap l = build_dilation(c, defects, d);
  v.isometry_defect = isometry_defect(l);
  const ModelSpaces ms = model_space(l, cfg, margin);
  BlhResult blh = run_blh(ms, cfg);
  v.reconstruction = blh.reconstruction;
  v.thetas = blh.inners;
  if (defects.rank() == 1) {
    v.q_match = subspace_distance(ms.q_basis, basis);
    const auto pieces = inner_range_projections(v.thetas, ms.space, margin, cfg);
    const auto rows = ms.margin_rows();
    LinearMap op = [&](const ComplexMatrix& x) -> ComplexMatrix {
      const ComplexMatrix full = embed_rows(x, rows, space.dim());
      const ComplexMatrix diff = apply_complement_product(pieces, space, full) - basis * (basis.adjoint() * full);
      return select_rows(diff, rows);
    };
    v.complement_match = normal_operator_norm(op, static_cast<Index>(rows.size()));
  }
  return v;
}

}  // namespace dcmodel
