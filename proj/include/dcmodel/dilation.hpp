#pragma once

// The isometric embedding h -> sum_k z^k D_{T*} T^{*k} h of a doubly
// commuting pure tuple into the D_{T*}-valued Hardy space, truncated at
// multi-degree d, together with the identities it must satisfy.

#include "dcmodel/hardy.hpp"
#include "dcmodel/tuples.hpp"

#include <utility>

namespace dcmodel {

struct DilationMap {
  ContractionTuple tuple;
  DefectData defects;
  TruncatedHardySpace space;  // coefficient space: coordinates in defects.big_defect_basis
  ComplexMatrix matrix;       // space.dim() x tuple.dim()

  int degree() const noexcept { return space.degree(); }
};

/// Coefficient of L h at multi-index k is V* D_{T*} T^{*k} h, V the defect basis.
inline DilationMap build_dilation(const ContractionTuple& t, const DefectData& defects, int d) {
  if (d < 0) throw Error(ErrorKind::DimensionMismatch, "negative degree");
  const Index r = defects.rank();
  const Index m = t.dim();
  TruncatedHardySpace space(t.size(), d, r);
  ComplexMatrix mat(space.dim(), m);
  const Index p0 = space.position(MultiIndex(t.size(), 0));
  mat.middleRows(p0 * r, r) = defects.big_defect_basis.adjoint() * defects.big_defect;
  std::vector<ComplexMatrix> adjoints;
  for (const auto& op : t.matrices()) adjoints.push_back(op.adjoint());
  // Graded order: k - e_j always precedes k.
  for (Index p = 0; p < space.num_indices(); ++p) {
    MultiIndex k = space.index_at(p);
    std::size_t j = 0;
    while (j < k.size() && k[j] == 0) ++j;
    if (j == k.size()) continue;
    k[j] -= 1;
    const Index q = space.position(k);
    mat.middleRows(p * r, r) = mat.middleRows(q * r, r) * adjoints[j];
  }
  return DilationMap{t, defects, std::move(space), std::move(mat)};
}

/// |I - L*L|
inline double isometry_defect(const DilationMap& l) {
  return operator_norm(identity(l.tuple.dim()) - l.matrix.adjoint() * l.matrix);
}

struct AdaptiveDegree {
  int start = 8;
  int cap = 4096;
  double max_entries = 3.0e7;  // memory guard on (d+1)^n * rank * dim
};

inline double intertwining_residual(const DilationMap& l, std::size_t i);

/// Truncation error of L: the larger of the isometry defect (which decays
/// like rho^{2(d+1)}) and the top-layer intertwining residual (rho^{d+1}).
inline double truncation_error(const DilationMap& l) {
  double worst = isometry_defect(l);
  for (std::size_t i = 0; i < l.tuple.size(); ++i) worst = std::max(worst, intertwining_residual(l, i));
  return worst;
}

/// Doubles d from `start` until the truncation error is at most tail_tol.
inline DilationMap build_dilation_adaptive(const ContractionTuple& t, const DefectData& defects,
                                           const ToleranceConfig& cfg = {}, const AdaptiveDegree& opt = {}) {
  double achieved = 0.0;
  for (int d = opt.start; d <= opt.cap; d *= 2) {
    double entries = static_cast<double>(defects.rank() * t.dim());
    for (std::size_t i = 0; i < t.size(); ++i) entries *= (d + 1);
    if (entries > opt.max_entries) break;
    DilationMap l = build_dilation(t, defects, d);
    achieved = truncation_error(l);
    if (achieved <= cfg.tail_tol) return l;
    if (d == 0) d = 1;
  }
  throw Error(ErrorKind::DegreeCapExceeded,
              "truncation error did not reach tail tolerance before the degree cap; achieved " + std::to_string(achieved),
              achieved);
}

/// |L T_i* - M_{z_i}* L|; nonzero only through the top layer k_i = d.
inline double intertwining_residual(const DilationMap& l, std::size_t i) {
  const SparseMatrix back = coshift_matrix(l.space, i);
  ComplexMatrix rhs = back * l.matrix;
  return operator_norm(l.matrix * l.tuple[i].adjoint() - rhs);
}

struct KernelSample {
  Point w;
  ComplexVector eta;  // coordinates in the defect basis
};

/// max over samples of |L*(S(., w) eta) - prod_i (I - conj(w_i) T_i)^{-1} D_{T*} eta|.
inline double adjoint_on_kernels_check(const DilationMap& l, const std::vector<KernelSample>& samples) {
  double worst = 0.0;
  const Index m = l.tuple.dim();
  for (const auto& s : samples) {
    ComplexVector k = kernel_vector(l.space, s.w, s.eta);
    ComplexVector lhs = l.matrix.adjoint() * k;
    ComplexVector rhs = l.defects.big_defect * (l.defects.big_defect_basis * s.eta);
    for (std::size_t i = 0; i < l.tuple.size(); ++i) {
      ComplexMatrix res = identity(m) - std::conj(s.w(static_cast<Index>(i))) * l.tuple[i];
      rhs = res.partialPivLu().solve(rhs);
    }
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

/// Distance between the range of the degree-0 block of L (i.e. of D_{T*})
/// and the defect space.
inline double minimality_check(const DilationMap& l, const ToleranceConfig& cfg = {}) {
  const Index r = l.defects.rank();
  const Index p0 = l.space.position(MultiIndex(l.tuple.size(), 0));
  ComplexMatrix block0 = l.matrix.middleRows(p0 * r, r);
  ComplexMatrix ambient = l.defects.big_defect_basis * block0;
  return subspace_distance(orthonormal_range_basis(ambient, cfg), l.defects.big_defect_basis);
}

/// |L* M_{z_i} L - T_i| for each i.
inline std::vector<double> compressed_tuple_residual(const DilationMap& l) {
  std::vector<double> out;
  for (std::size_t i = 0; i < l.tuple.size(); ++i) {
    const SparseMatrix fwd = shift_matrix(l.space, i);
    ComplexMatrix shifted = fwd * l.matrix;
    out.push_back(operator_norm(l.matrix.adjoint() * shifted - l.tuple[i]));
  }
  return out;
}

}  // namespace dcmodel
