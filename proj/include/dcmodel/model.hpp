#pragma once

// Characteristic functions of the individual contractions, their one-variable
// multipliers on the polydisc, the closed-form kernel identities, and the
// model space S_T whose orthogonal complement carries the tuple.

#include "dcmodel/dilation.hpp"

#include <utility>

namespace dcmodel {

namespace detail {

inline ComplexMatrix checked_inverse(const ComplexMatrix& a) {
  Eigen::FullPivLU<ComplexMatrix> lu(a);
  if (!lu.isInvertible() || lu.rcond() < 1e-13) {
    throw Error(ErrorKind::ResolventSingular, "resolvent is singular or badly conditioned", lu.rcond());
  }
  return lu.inverse();
}

/// -T + D_{T*} (I - zT*)^{-1} z D_T on the whole space.
inline ComplexMatrix charfn_ambient(const ComplexMatrix& t, Complex z, const OperatorDefect& d) {
  const ComplexMatrix res = checked_inverse(identity(t.rows()) - z * t.adjoint());
  return -t + d.defect_star * res * (z * d.defect);
}

/// D_{T*} (I - zT*)^{-1} (I - conj(w) T)^{-1} D_{T*}
inline ComplexMatrix resolvent_kernel(const ComplexMatrix& t, Complex z, Complex w, const OperatorDefect& d) {
  const ComplexMatrix id = identity(t.rows());
  return d.defect_star * checked_inverse(id - z * t.adjoint()) * checked_inverse(id - std::conj(w) * t) * d.defect_star;
}

inline void require_in_disc(Complex z) {
  if (!(std::abs(z) < 1.0)) throw Error(ErrorKind::PointOutsidePolydisc, "point outside the unit disc", std::abs(z));
}

}  // namespace detail

/// theta_T(z) as a map D_T -> D_{T*} in defect-basis coordinates.
inline ComplexMatrix charfn_eval(const ComplexMatrix& t, Complex z, const OperatorDefect& d) {
  return d.basis_star.adjoint() * detail::charfn_ambient(t, z, d) * d.basis;
}

/// Taylor realization of a characteristic function.
struct CharFn {
  std::size_t op_index = 0;
  ComplexMatrix op;
  OperatorDefect defect;
  std::vector<ComplexMatrix> taylor;  // theta_0 = -T, theta_m = D_{T*} T^{*(m-1)} D_T, in defect coordinates
  double decay_rate = 0.0;            // last measured |theta_m| / |theta_{m-1}|

  Index domain_dim() const noexcept { return defect.basis.cols(); }
  Index codomain_dim() const noexcept { return defect.basis_star.cols(); }

  ComplexMatrix evaluate(Complex z) const {
    ComplexMatrix acc = ComplexMatrix::Zero(codomain_dim(), domain_dim());
    for (auto it = taylor.rbegin(); it != taylor.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// theta_0 .. theta_d; entries past the stored expansion are computed exactly.
  std::vector<ComplexMatrix> coefficients(int d) const {
    std::vector<ComplexMatrix> out(taylor.begin(), taylor.begin() + std::min<std::ptrdiff_t>(taylor.size(), d + 1));
    if (static_cast<int>(out.size()) > d) return out;
    ComplexMatrix power = identity(op.rows());
    const ComplexMatrix back = op.adjoint();
    for (int m = 1; m <= d; ++m) {
      if (m >= static_cast<int>(out.size())) {
        out.push_back(defect.basis_star.adjoint() * defect.defect_star * power * defect.defect * defect.basis);
      }
      power = power * back;
    }
    return out;
  }
};

inline CharFn charfn_taylor(std::size_t op_index, const ComplexMatrix& t, const OperatorDefect& d, int m_max,
                            const ToleranceConfig& cfg = {}) {
  CharFn cf{op_index, t, d, {}, 0.0};
  const ComplexMatrix lhs = d.basis_star.adjoint() * d.defect_star;
  const ComplexMatrix rhs = d.defect * d.basis;
  cf.taylor.push_back(d.basis_star.adjoint() * (-t) * d.basis);
  ComplexMatrix power = identity(t.rows());
  const ComplexMatrix back = t.adjoint();
  double previous = 0.0;
  double tail = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    cf.taylor.push_back(lhs * power * rhs);
    const double nrm = operator_norm(cf.taylor.back());
    if (m >= 2 && previous > 0.0) cf.decay_rate = nrm / previous;
    previous = nrm;
    power = power * back;
    // Every later coefficient is bounded by |T^{*m}|; a single small
    // coefficient is not enough (theta_1 = D_{T*} D_T can vanish while theta_2 does not).
    tail = operator_norm(power);
    if (tail <= cfg.rank_tol) return cf;
  }
  throw Error(ErrorKind::DegreeCapExceeded,
              "characteristic function tail |T^{*m}| still above rank_tol at m_max = " + std::to_string(m_max), tail);
}

/// max over equispaced boundary points of |theta(e^{it})* theta(e^{it}) - I|.
inline double inner_boundary_check(const CharFn& cf, int samples = 64, const ToleranceConfig& cfg = {}) {
  if (!(spectral_radius(cf.op) < 1.0 - cfg.rank_tol)) {
    throw Error(ErrorKind::ResolventSingular, "boundary values need spectral radius < 1");
  }
  double worst = 0.0;
  const ComplexMatrix id = identity(cf.domain_dim());
  for (int s = 0; s < samples; ++s) {
    const Complex z = std::polar(1.0, 2.0 * M_PI * s / samples);
    const ComplexMatrix th = charfn_eval(cf.op, z, cf.defect);
    worst = std::max(worst, operator_norm(th.adjoint() * th - id));
  }
  return worst;
}

/// Lower-triangular block Toeplitz matrix on (d+1) layers with the given
/// coefficient blocks (rows x cols each).
inline ComplexMatrix toeplitz_lower(const std::vector<ComplexMatrix>& coeffs, int d, Index rows, Index cols) {
  ComplexMatrix out = ComplexMatrix::Zero((d + 1) * rows, (d + 1) * cols);
  for (int a = 0; a <= d; ++a) {
    for (int b = 0; b <= a; ++b) {
      const auto m = static_cast<std::size_t>(a - b);
      if (m < coeffs.size()) out.block(a * rows, b * cols, rows, cols) = coeffs[m];
    }
  }
  return out;
}

/// M_Theta for Theta(z) = theta(z_i): block Toeplitz in z_i, identity elsewhere.
struct OneVarMultiplier {
  CharFn char_fn;
  TruncatedHardySpace domain;  // D_{T_i}-valued
  LocalOperator op;

  TruncatedHardySpace codomain() const { return domain.with_coeff_dim(op.coeff_out); }
  ComplexMatrix apply(const ComplexMatrix& x) const { return op.apply(domain, x); }
  ComplexMatrix dense() const { return op.dense(domain); }
};

inline OneVarMultiplier multiplier_matrix(const CharFn& cf, const TruncatedHardySpace& space) {
  if (cf.op_index >= space.variables()) throw Error(ErrorKind::DimensionMismatch, "multiplier variable out of range");
  const int d = space.degree();
  LocalOperator op{cf.op_index, toeplitz_lower(cf.coefficients(d), d, cf.codomain_dim(), cf.domain_dim()),
                   cf.domain_dim(), cf.codomain_dim()};
  return OneVarMultiplier{cf, space.with_coeff_dim(cf.domain_dim()), std::move(op)};
}

/// M_Theta M_Theta* restricted to the D_{T*}-valued space, in the coordinates
/// of the big defect basis. This is the exact compression of the infinite
/// operator to the degree box, since the Toeplitz factor is lower triangular.
inline LocalOperator defect_restricted_projection(const CharFn& cf, const ComplexMatrix& big_defect_basis, int d) {
  const ComplexMatrix embed = cf.defect.basis_star.adjoint() * big_defect_basis;  // D_{T*} coords -> D_{T_i*} coords
  const ComplexMatrix toep = toeplitz_lower(cf.coefficients(d), d, cf.codomain_dim(), cf.domain_dim());
  const ComplexMatrix factor = kron(identity(d + 1), embed.adjoint()) * toep;
  const Index r = big_defect_basis.cols();
  return LocalOperator{cf.op_index, hermitian_part(factor * factor.adjoint()), r, r};
}

using ScalarPair = std::pair<Complex, Complex>;

struct PointPair {
  Point z;
  Point w;
};

/// S(z,w)(I - theta(z) theta(w)*) = D_{T*}(I - zT*)^{-1}(I - conj(w)T)^{-1}D_{T*},
/// both sides in closed form.
inline double kernel_identity_check(const ComplexMatrix& t, const OperatorDefect& d, const std::vector<ScalarPair>& samples) {
  double worst = 0.0;
  const Index rs = d.basis_star.cols();
  for (const auto& [z, w] : samples) {
    detail::require_in_disc(z);
    detail::require_in_disc(w);
    const Complex kern = 1.0 / (1.0 - z * std::conj(w));
    const ComplexMatrix tz = charfn_eval(t, z, d);
    const ComplexMatrix tw = charfn_eval(t, w, d);
    const ComplexMatrix lhs = kern * (identity(rs) - tz * tw.adjoint());
    const ComplexMatrix rhs = d.basis_star.adjoint() * detail::resolvent_kernel(t, z, w, d) * d.basis_star;
    worst = std::max(worst, operator_norm(lhs - rhs));
  }
  return worst;
}

namespace detail {

inline void require_pair_shape(const PointPair& p, std::size_t n) {
  if (static_cast<std::size_t>(p.z.size()) != n || static_cast<std::size_t>(p.w.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "sample point dimension differs from the tuple size");
  }
  require_in_polydisc(p.z);
  require_in_polydisc(p.w);
}

/// Theta_i(z) Theta_i(w)* on the ambient space.
inline ComplexMatrix theta_gram_ambient(const ComplexMatrix& t, Complex z, Complex w, const OperatorDefect& d) {
  const ComplexMatrix tz = charfn_eval(t, z, d);
  const ComplexMatrix tw = charfn_eval(t, w, d);
  return d.basis_star * tz * tw.adjoint() * d.basis_star.adjoint();
}

/// prod_i (I - Theta_i(z) Theta_i(w)*) restricted to D_{T*}, as a product of restrictions.
inline ComplexMatrix restricted_theta_product(const ContractionTuple& t, const DefectData& defects, const PointPair& p) {
  const ComplexMatrix& v = defects.big_defect_basis;
  ComplexMatrix acc = identity(v.cols());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto ii = static_cast<Index>(i);
    const ComplexMatrix g = theta_gram_ambient(t[i], p.z(ii), p.w(ii), defects.per_op[i]);
    acc = acc * (identity(v.cols()) - v.adjoint() * g * v);
  }
  return acc;
}

}  // namespace detail

/// max |(I - P_{D_T*}) X P_{D_T*}| over the two bracketed operator families
/// that must leave D_{T*} invariant.
inline double defect_invariance_check(const ContractionTuple& t, const DefectData& defects, const std::vector<PointPair>& samples) {
  const ComplexMatrix& v = defects.big_defect_basis;
  const ComplexMatrix away = identity(t.dim()) - v * v.adjoint();
  double worst = 0.0;
  for (const auto& p : samples) {
    detail::require_pair_shape(p, t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto ii = static_cast<Index>(i);
      const ComplexMatrix x1 = detail::resolvent_kernel(t[i], p.z(ii), p.w(ii), defects.per_op[i]);
      const ComplexMatrix x2 = detail::theta_gram_ambient(t[i], p.z(ii), p.w(ii), defects.per_op[i]);
      worst = std::max({worst, operator_norm(away * x1 * v), operator_norm(away * x2 * v)});
    }
  }
  return worst;
}

/// prod_i [D_{T_i*}(I - z_i T_i*)^{-1}(I - conj(w_i) T_i)^{-1} D_{T_i*}] on D_{T*}
/// against S(z,w) prod_i (I - Theta_i(z)Theta_i(w)*) on D_{T*}.
inline double product_kernel_identity_check(const ContractionTuple& t, const DefectData& defects,
                                            const std::vector<PointPair>& samples) {
  const ComplexMatrix& v = defects.big_defect_basis;
  double worst = 0.0;
  for (const auto& p : samples) {
    detail::require_pair_shape(p, t.size());
    ComplexMatrix lhs = identity(t.dim());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto ii = static_cast<Index>(i);
      lhs = lhs * detail::resolvent_kernel(t[i], p.z(ii), p.w(ii), defects.per_op[i]);
    }
    const ComplexMatrix rhs = szego_kernel(p.z, p.w) * detail::restricted_theta_product(t, defects, p);
    worst = std::max(worst, operator_norm(v.adjoint() * lhs * v - rhs));
  }
  return worst;
}

/// Gramian identity L L* = prod (I - M_Theta M_Theta*) tested on kernel
/// functions: <L*(S_w eta), L*(S_z zeta)> computed through the closed-form
/// adjoint, against S(z,w) <prod (I - Theta(z)Theta(w)*) eta, zeta>.
inline double gramian_kernel_check(const ContractionTuple& t, const DefectData& defects, const std::vector<PointPair>& samples) {
  const ComplexMatrix dv = defects.big_defect * defects.big_defect_basis;
  auto adjoint_on_kernel = [&](const Point& w) {
    ComplexMatrix acc = dv;
    for (std::size_t i = 0; i < t.size(); ++i) {
      acc = detail::checked_inverse(identity(t.dim()) - std::conj(w(static_cast<Index>(i))) * t[i]) * acc;
    }
    return acc;
  };
  double worst = 0.0;
  for (const auto& p : samples) {
    detail::require_pair_shape(p, t.size());
    const ComplexMatrix lhs = adjoint_on_kernel(p.z).adjoint() * adjoint_on_kernel(p.w);
    const ComplexMatrix rhs = szego_kernel(p.z, p.w) * detail::restricted_theta_product(t, defects, p);
    worst = std::max(worst, operator_norm(lhs - rhs));
  }
  return worst;
}

/// prod_i (I - P_i) x for local operators P_i on `space`.
inline ComplexMatrix apply_complement_product(const std::vector<LocalOperator>& ps, const TruncatedHardySpace& space,
                                              const ComplexMatrix& x) {
  ComplexMatrix y = x;
  for (auto it = ps.rbegin(); it != ps.rend(); ++it) y -= it->apply(space, y);
  return y;
}

inline void require_margin(int margin, int d) {
  if (margin < 0 || margin >= d) {
    throw Error(ErrorKind::MarginTooLarge, "margin " + std::to_string(margin) + " must lie in [0, " + std::to_string(d) + ")");
  }
}

/// |L L* - prod (I - P_i)| on the coefficient layers with every k_i <= d - margin.
inline double gramian_operator_check(const DilationMap& l, const std::vector<LocalOperator>& restricted, int margin,
                                     const MatrixFreeOptions& opt = {}) {
  require_margin(margin, l.degree());
  const auto rows = l.space.coordinates_up_to(l.degree() - margin);
  const Index n = l.space.dim();
  LinearMap op = [&](const ComplexMatrix& x) -> ComplexMatrix {
    const ComplexMatrix full = embed_rows(x, rows, n);
    const ComplexMatrix diff = l.matrix * (l.matrix.adjoint() * full) - apply_complement_product(restricted, l.space, full);
    return select_rows(diff, rows);
  };
  return normal_operator_norm(op, static_cast<Index>(rows.size()), opt);
}

/// Orthogonal projection onto the sum of the ranges of commuting projections:
/// I - prod (I - P_i).
inline ComplexMatrix sum_projection(const std::vector<ComplexMatrix>& ps, const ToleranceConfig& cfg = {}) {
  if (ps.empty()) throw Error(ErrorKind::DimensionMismatch, "no projections");
  const Index n = ps.front().rows();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].rows() != n || ps[i].cols() != n) throw Error(ErrorKind::DimensionMismatch, "projection sizes differ");
    const double herm = operator_norm(ps[i] - ps[i].adjoint());
    const double idem = operator_norm(ps[i] * ps[i] - ps[i]);
    if (herm > cfg.check_tol || idem > cfg.check_tol) {
      throw Error(ErrorKind::NotProjection, "family member " + std::to_string(i + 1) + " is not an orthogonal projection",
                  std::max(herm, idem));
    }
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const double c = operator_norm(ps[i] * ps[j] - ps[j] * ps[i]);
      if (c > cfg.check_tol) {
        throw Error(ErrorKind::NotCommuting, "members " + std::to_string(i + 1) + " and " + std::to_string(j + 1), c);
      }
    }
  }
  ComplexMatrix acc = identity(n);
  for (const auto& p : ps) acc = acc * (identity(n) - p);
  ComplexMatrix out = identity(n) - acc;
  const double drift = std::max(operator_norm(out - out.adjoint()), operator_norm(out * out - out));
  if (drift > cfg.check_tol) throw Error(ErrorKind::NumericalFailure, "sum projection is not a projection", drift);
  return out;
}

/// Model spaces on the truncated D_{T*}-valued Hardy space.
struct ModelSpaces {
  TruncatedHardySpace space;
  int margin = 0;
  std::vector<CharFn> char_fns;
  std::vector<LocalOperator> restricted;   // P_i before rounding
  std::vector<LocalOperator> projections;  // P_i with eigenvalues rounded to {0,1}
  std::vector<double> drift;               // |P_i - rounded P_i|
  std::vector<double> idempotency_residual;  // |P_i^2 - P_i| on margin layers
  ComplexMatrix q_basis;                   // ran L
  ComplexMatrix complement_basis;          // ran prod (I - rounded P_i)
  double range_distance = 0.0;             // q_basis vs complement_basis on margin layers
  std::vector<double> compression_residuals;

  ComplexMatrix apply_complement(const ComplexMatrix& x) const { return apply_complement_product(projections, space, x); }
  ComplexMatrix apply_s(const ComplexMatrix& x) const { return x - apply_complement(x); }
  ComplexMatrix s_projection() const { return apply_s(identity(space.dim())); }
  std::vector<Index> margin_rows() const { return space.coordinates_up_to(space.degree() - margin); }
};

/// Distance between two subspaces restricted to a set of coordinates,
/// |R*(P_A - P_B)R| with R the coordinate selection.
inline double restricted_subspace_distance(const ComplexMatrix& a, const ComplexMatrix& b, const std::vector<Index>& rows) {
  return gram_difference_norm(select_rows(a, rows), select_rows(b, rows));
}

/// Rounds the spectrum of a Hermitian block to {0,1}; returns the projection and the drift.
inline std::pair<ComplexMatrix, double> round_to_projection(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h));
  const RealVector& ev = es.eigenvalues();
  ComplexMatrix proj = ComplexMatrix::Zero(h.rows(), h.cols());
  double drift = 0.0;
  for (Index k = 0; k < ev.size(); ++k) {
    const double rounded = ev(k) > 0.5 ? 1.0 : 0.0;
    drift = std::max(drift, std::abs(ev(k) - rounded));
    if (rounded == 1.0) proj += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  }
  return {hermitian_part(proj), drift};
}

inline int default_margin(int d) { return d / 2; }

inline ModelSpaces model_space(const DilationMap& l, const ToleranceConfig& cfg = {}, int margin = -1, int m_max = 4096) {
  const int d = l.degree();
  if (margin < 0) margin = default_margin(d);
  if (d > 0) require_margin(margin, d);
  const auto& t = l.tuple;
  ModelSpaces ms{l.space, margin, {}, {}, {}, {}, {}, {}, {}, 0.0, {}};
  const Index r = l.defects.rank();
  const Index keep = (d - margin + 1) * r;
  for (std::size_t i = 0; i < t.size(); ++i) {
    ms.char_fns.push_back(charfn_taylor(i, t[i], l.defects.per_op[i], m_max, cfg));
    LocalOperator raw = defect_restricted_projection(ms.char_fns.back(), l.defects.big_defect_basis, d);
    const ComplexMatrix& pb = raw.block;
    const double idem = operator_norm((pb * pb - pb).topLeftCorner(keep, keep));
    if (idem > cfg.tail_tol) {
      throw Error(ErrorKind::ProjectionDriftExceedsTolerance,
                  "P_" + std::to_string(i + 1) + " is not idempotent on margin layers", idem);
    }
    auto [rounded, drift] = round_to_projection(pb);
    ms.idempotency_residual.push_back(idem);
    ms.drift.push_back(drift);
    ms.projections.push_back(LocalOperator{i, std::move(rounded), r, r});
    ms.restricted.push_back(std::move(raw));
  }
  ms.q_basis = orthonormal_range_basis(l.matrix, cfg);
  LinearMap complement = [&ms](const ComplexMatrix& x) -> ComplexMatrix { return ms.apply_complement(x); };
  ms.complement_basis = projection_range(complement, ms.space.dim(), t.dim(), cfg);
  ms.range_distance = restricted_subspace_distance(ms.q_basis, ms.complement_basis, ms.margin_rows());
  ms.compression_residuals = compressed_tuple_residual(l);
  return ms;
}

/// |P_i P_j - P_j P_i| on margin layers. The commutator acts only on
/// variables i, j and the coefficients, so it is evaluated on a two-variable
/// copy of the space with identical layer structure.
inline double projection_commutation_residual(const ModelSpaces& ms, std::size_t i, std::size_t j,
                                              const MatrixFreeOptions& opt = {}) {
  const int d = ms.space.degree();
  TruncatedHardySpace pair_space(2, d, ms.space.coeff_dim());
  LocalOperator a = ms.projections.at(i);
  LocalOperator b = ms.projections.at(j);
  a.variable = 0;
  b.variable = 1;
  const auto rows = pair_space.coordinates_up_to(d - ms.margin);
  MatrixFreeOptions mf = opt;
  mf.dense_limit = std::min<Index>(mf.dense_limit, 400);
  LinearMap op = [&](const ComplexMatrix& x) -> ComplexMatrix {
    const ComplexMatrix full = embed_rows(x, rows, pair_space.dim());
    const ComplexMatrix c = a.apply(pair_space, b.apply(pair_space, full)) - b.apply(pair_space, a.apply(pair_space, full));
    return select_rows(c, rows);
  };
  return normal_operator_norm(op, static_cast<Index>(rows.size()), mf);
}

}  // namespace dcmodel
