#pragma once

// Truncated model of the vector-valued Hardy space over the polydisc: power
// series with multi-degree at most d in each of n variables and coefficients
// in C^coeff_dim. Coordinates are ordered multi-index slowest, coefficient
// fastest; multi-indices are in graded order (total degree, then lex).

#include "dcmodel/matrixcore.hpp"

#include <Eigen/Sparse>

#include <memory>
#include <numeric>
#include <vector>

namespace dcmodel {

using MultiIndex = std::vector<int>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Point = ComplexVector;

inline std::vector<MultiIndex> enumerate_multi_indices(std::size_t n, int d) {
  if (n == 0 || d < 0) throw Error(ErrorKind::DimensionMismatch, "need n >= 1 and d >= 0");
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= static_cast<std::size_t>(d + 1);
  std::vector<MultiIndex> out;
  out.reserve(count);
  MultiIndex k(n, 0);
  for (std::size_t c = 0; c < count; ++c) {
    out.push_back(k);
    for (std::size_t i = n; i-- > 0;) {
      if (++k[i] <= d) break;
      k[i] = 0;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
    const int sa = std::accumulate(a.begin(), a.end(), 0);
    const int sb = std::accumulate(b.begin(), b.end(), 0);
    if (sa != sb) return sa < sb;
    return a < b;
  });
  return out;
}

class TruncatedHardySpace {
 public:
  TruncatedHardySpace(std::size_t n, int degree, Index coeff_dim)
      : n_(n), degree_(degree), coeff_dim_(coeff_dim), layout_(std::make_shared<Layout>(n, degree)) {
    if (coeff_dim < 0) throw Error(ErrorKind::DimensionMismatch, "negative coefficient dimension");
  }

  std::size_t variables() const noexcept { return n_; }
  int degree() const noexcept { return degree_; }
  Index coeff_dim() const noexcept { return coeff_dim_; }
  Index num_indices() const noexcept { return static_cast<Index>(layout_->indices.size()); }
  Index dim() const noexcept { return num_indices() * coeff_dim_; }

  const std::vector<MultiIndex>& indices() const noexcept { return layout_->indices; }
  const MultiIndex& index_at(Index pos) const { return layout_->indices.at(static_cast<std::size_t>(pos)); }

  /// Graded position of `k`, or -1 when some component exceeds the degree cap.
  Index position(const MultiIndex& k) const {
    if (k.size() != n_) throw Error(ErrorKind::DimensionMismatch, "multi-index length");
    Index lex = 0;
    for (int c : k) {
      if (c < 0 || c > degree_) return -1;
      lex = lex * (degree_ + 1) + c;
    }
    return layout_->lex_to_pos[static_cast<std::size_t>(lex)];
  }

  Index offset(Index pos, Index c) const noexcept { return pos * coeff_dim_ + c; }

  /// Positions along variable `var` with all other components fixed; fiber f
  /// occupies entries [f*(d+1), (f+1)*(d+1)) and entry t has k_var = t.
  const std::vector<Index>& fibers(std::size_t var) const { return layout_->fibers.at(var); }
  Index fiber_count() const noexcept { return num_indices() / (degree_ + 1); }

  /// Same multi-index layout with another coefficient space.
  TruncatedHardySpace with_coeff_dim(Index r) const {
    TruncatedHardySpace s = *this;
    s.coeff_dim_ = r;
    return s;
  }

  /// Coordinates whose multi-index has every component <= cap.
  std::vector<Index> coordinates_up_to(int cap) const {
    std::vector<Index> out;
    for (Index p = 0; p < num_indices(); ++p) {
      const auto& k = index_at(p);
      if (std::all_of(k.begin(), k.end(), [cap](int c) { return c <= cap; })) {
        for (Index c = 0; c < coeff_dim_; ++c) out.push_back(offset(p, c));
      }
    }
    return out;
  }

 private:
  struct Layout {
    std::vector<MultiIndex> indices;
    std::vector<Index> lex_to_pos;
    std::vector<std::vector<Index>> fibers;

    Layout(std::size_t n, int d) : indices(enumerate_multi_indices(n, d)) {
      lex_to_pos.assign(indices.size(), -1);
      auto lex = [d](const MultiIndex& k) {
        Index v = 0;
        for (int c : k) v = v * (d + 1) + c;
        return v;
      };
      for (std::size_t p = 0; p < indices.size(); ++p) lex_to_pos[static_cast<std::size_t>(lex(indices[p]))] = static_cast<Index>(p);
      fibers.resize(n);
      for (std::size_t var = 0; var < n; ++var) {
        auto& f = fibers[var];
        f.reserve(indices.size());
        for (const auto& k : indices) {
          if (k[var] != 0) continue;
          MultiIndex m = k;
          for (int t = 0; t <= d; ++t) {
            m[var] = t;
            f.push_back(lex_to_pos[static_cast<std::size_t>(lex(m))]);
          }
        }
      }
    }
  };

  std::size_t n_;
  int degree_;
  Index coeff_dim_;
  std::shared_ptr<const Layout> layout_;
};

/// Rows of `x` at the given coordinates.
inline ComplexMatrix select_rows(const ComplexMatrix& x, const std::vector<Index>& rows) {
  ComplexMatrix out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
  return out;
}

/// Inverse of select_rows: zero everywhere except the listed coordinates.
inline ComplexMatrix embed_rows(const ComplexMatrix& x, const std::vector<Index>& rows, Index dim) {
  ComplexMatrix out = ComplexMatrix::Zero(dim, x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(rows[i]) = x.row(static_cast<Index>(i));
  return out;
}

/// An operator acting on the (k_var, coefficient) pair through a dense block
/// of size ((d+1)*coeff_out) x ((d+1)*coeff_in), identity in the other variables.
struct LocalOperator {
  std::size_t variable = 0;
  ComplexMatrix block;
  Index coeff_in = 0;
  Index coeff_out = 0;

  ComplexMatrix apply(const TruncatedHardySpace& space, const ComplexMatrix& x) const {
    const Index layers = space.degree() + 1;
    const Index fibers = space.fiber_count();
    const Index p = x.cols();
    if (x.rows() != space.num_indices() * coeff_in || block.cols() != layers * coeff_in ||
        block.rows() != layers * coeff_out) {
      throw Error(ErrorKind::DimensionMismatch, "local operator shape does not match the space");
    }
    const auto& fib = space.fibers(variable);
    ComplexMatrix gathered(layers * coeff_in, fibers * p);
    for (Index f = 0; f < fibers; ++f) {
      for (Index t = 0; t < layers; ++t) {
        const Index pos = fib[static_cast<std::size_t>(f * layers + t)];
        gathered.block(t * coeff_in, f * p, coeff_in, p) = x.middleRows(pos * coeff_in, coeff_in);
      }
    }
    ComplexMatrix mapped = block * gathered;
    ComplexMatrix out(space.num_indices() * coeff_out, p);
    for (Index f = 0; f < fibers; ++f) {
      for (Index t = 0; t < layers; ++t) {
        const Index pos = fib[static_cast<std::size_t>(f * layers + t)];
        out.middleRows(pos * coeff_out, coeff_out) = mapped.block(t * coeff_out, f * p, coeff_out, p);
      }
    }
    return out;
  }

  ComplexMatrix dense(const TruncatedHardySpace& space) const {
    return apply(space, identity(space.num_indices() * coeff_in));
  }
};

/// One-variable shift on C^{d+1} (x) C^r: e_t -> e_{t+1}, top layer -> 0.
inline ComplexMatrix one_variable_shift(int d, Index r) {
  ComplexMatrix s = ComplexMatrix::Zero((d + 1) * r, (d + 1) * r);
  for (Index t = 0; t < d; ++t) s.block((t + 1) * r, t * r, r, r) = identity(r);
  return s;
}

inline SparseMatrix shift_matrix(const TruncatedHardySpace& space, std::size_t var) {
  if (var >= space.variables()) throw Error(ErrorKind::DimensionMismatch, "variable index out of range");
  std::vector<Eigen::Triplet<Complex>> trips;
  const Index r = space.coeff_dim();
  for (Index p = 0; p < space.num_indices(); ++p) {
    MultiIndex k = space.index_at(p);
    if (k[var] >= space.degree()) continue;
    k[var] += 1;
    const Index q = space.position(k);
    for (Index c = 0; c < r; ++c) trips.emplace_back(space.offset(q, c), space.offset(p, c), Complex(1.0));
  }
  SparseMatrix s(space.dim(), space.dim());
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

inline SparseMatrix coshift_matrix(const TruncatedHardySpace& space, std::size_t var) {
  return SparseMatrix(shift_matrix(space, var).adjoint());
}

inline void require_in_polydisc(const Point& z) {
  for (Index i = 0; i < z.size(); ++i) {
    if (!(std::abs(z(i)) < 1.0)) {
      throw Error(ErrorKind::PointOutsidePolydisc, "coordinate " + std::to_string(i + 1) + " has modulus " +
                                                        std::to_string(std::abs(z(i))), std::abs(z(i)));
    }
  }
}

/// prod_i (1 - z_i conj(w_i))^{-1}
inline Complex szego_kernel(const Point& z, const Point& w) {
  if (z.size() != w.size()) throw Error(ErrorKind::DimensionMismatch, "points of different dimension");
  require_in_polydisc(z);
  require_in_polydisc(w);
  Complex k(1.0);
  for (Index i = 0; i < z.size(); ++i) k /= (1.0 - z(i) * std::conj(w(i)));
  return k;
}

/// Truncated coefficients conj(w)^k eta of S(., w) eta.
inline ComplexVector kernel_vector(const TruncatedHardySpace& space, const Point& w, const ComplexVector& eta) {
  if (static_cast<std::size_t>(w.size()) != space.variables() || eta.size() != space.coeff_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "kernel_vector point or coefficient size");
  }
  require_in_polydisc(w);
  ComplexVector out(space.dim());
  for (Index p = 0; p < space.num_indices(); ++p) {
    const auto& k = space.index_at(p);
    Complex mono(1.0);
    for (std::size_t i = 0; i < k.size(); ++i) mono *= std::pow(std::conj(w(static_cast<Index>(i))), k[i]);
    out.segment(p * space.coeff_dim(), space.coeff_dim()) = mono * eta;
  }
  return out;
}

/// f(z) for a coefficient vector f.
inline ComplexVector evaluate(const TruncatedHardySpace& space, const ComplexVector& f, const Point& z) {
  ComplexVector out = ComplexVector::Zero(space.coeff_dim());
  for (Index p = 0; p < space.num_indices(); ++p) {
    const auto& k = space.index_at(p);
    Complex mono(1.0);
    for (std::size_t i = 0; i < k.size(); ++i) mono *= std::pow(z(static_cast<Index>(i)), k[i]);
    out += mono * f.segment(p * space.coeff_dim(), space.coeff_dim());
  }
  return out;
}

/// sum over subsets S of (-1)^|S| (prod_{i in S} M_{z_i})(prod_{i in S} M_{z_i}^*).
inline SparseMatrix constants_projection(const TruncatedHardySpace& space) {
  const std::size_t n = space.variables();
  std::vector<SparseMatrix> shifts;
  for (std::size_t i = 0; i < n; ++i) shifts.push_back(shift_matrix(space, i));
  SparseMatrix total(space.dim(), space.dim());
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    SparseMatrix fwd(space.dim(), space.dim());
    fwd.setIdentity();
    SparseMatrix back = fwd;
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) {
        fwd = SparseMatrix(fwd * shifts[i]);
        back = SparseMatrix(back * SparseMatrix(shifts[i].adjoint()));
        ++bits;
      }
    }
    SparseMatrix term = fwd * back;
    total += (bits % 2 == 0 ? 1.0 : -1.0) * term;
  }
  total.prune(Complex(0.0));
  return total;
}

/// Distance (Frobenius, an upper bound for the operator norm) between the
/// inclusion-exclusion sum and the projection onto degree-0 coefficients.
inline double constants_projection_check(const TruncatedHardySpace& space) {
  SparseMatrix direct(space.dim(), space.dim());
  std::vector<Eigen::Triplet<Complex>> trips;
  const Index p0 = space.position(MultiIndex(space.variables(), 0));
  for (Index c = 0; c < space.coeff_dim(); ++c) trips.emplace_back(space.offset(p0, c), space.offset(p0, c), Complex(1.0));
  direct.setFromTriplets(trips.begin(), trips.end());
  SparseMatrix diff = constants_projection(space) - direct;
  return diff.norm();
}

}  // namespace dcmodel
