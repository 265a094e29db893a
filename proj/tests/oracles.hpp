#pragma once

// Independent reference computations for the tests: closed-form scalar
// formulas and brute-force constructions that share no code paths with the
// library beyond basic Eigen arithmetic.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Taylor coefficients of b_a(z) = (z - a) / (1 - conj(a) z): -a, (1 - |a|^2) conj(a)^{k-1}.
inline std::vector<Complex> mobius_coefficients(Complex a, int d) {
  std::vector<Complex> c(static_cast<std::size_t>(d) + 1);
  c[0] = -a;
  for (int k = 1; k <= d; ++k) c[static_cast<std::size_t>(k)] = (1.0 - std::norm(a)) * std::pow(std::conj(a), k - 1);
  return c;
}

inline Complex mobius(Complex a, Complex z) { return (z - a) / (1.0 - std::conj(a) * z); }

/// Smallest |c - u * ref| over unimodular u, with u fixed by the first
/// coefficient of ref that is not negligible.
inline double phase_aligned_error(const std::vector<Complex>& c, const std::vector<Complex>& ref, int upto) {
  Complex u = 1.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    if (std::abs(ref[k]) > 1e-3) {
      u = c[k] / ref[k];
      u /= std::abs(u);
      break;
    }
  }
  double worst = 0.0;
  for (int k = 0; k <= upto; ++k) worst = std::max(worst, std::abs(c[static_cast<std::size_t>(k)] - u * ref[static_cast<std::size_t>(k)]));
  return worst;
}

/// Largest singular value through a full Jacobi SVD.
inline double norm2(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

/// Projection onto the span of the columns of `gens`, by Gram-Schmidt with
/// reorthogonalization (independent of the library's SVD-based bases).
inline Matrix span_projection(const Matrix& gens, double tol = 1e-9) {
  std::vector<Eigen::VectorXcd> basis;
  for (Eigen::Index j = 0; j < gens.cols(); ++j) {
    Eigen::VectorXcd v = gens.col(j);
    const double scale = v.norm();
    if (scale == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b * b.dot(v);
    }
    if (v.norm() > tol * scale) basis.push_back(v / v.norm());
  }
  Matrix p = Matrix::Zero(gens.rows(), gens.rows());
  for (const auto& b : basis) p += b * b.adjoint();
  return p;
}

/// Projection onto the sum of the ranges of a family of projections.
inline Matrix union_of_ranges(const std::vector<Matrix>& ps) {
  Eigen::Index total = 0;
  for (const auto& p : ps) total += p.cols();
  Matrix gens(ps.front().rows(), total);
  Eigen::Index at = 0;
  for (const auto& p : ps) {
    gens.middleCols(at, p.cols()) = p;
    at += p.cols();
  }
  return span_projection(gens);
}

/// A Haar-ish unitary from a Gaussian matrix by modified Gram-Schmidt.
inline Matrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = Complex(g(rng), g(rng));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < j; ++k) a.col(j) -= a.col(k) * a.col(k).dot(a.col(j));
    a.col(j).normalize();
  }
  return a;
}

/// Commuting projections U diag(pattern_i) U*, with random 0/1 patterns.
inline std::vector<Matrix> commuting_projection_family(Eigen::Index dim, int count, std::mt19937_64& rng) {
  const Matrix u = random_unitary(dim, rng);
  std::bernoulli_distribution coin(0.4);
  std::vector<Matrix> out;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXcd diag(dim);
    for (Eigen::Index k = 0; k < dim; ++k) diag(k) = coin(rng) ? 1.0 : 0.0;
    out.push_back(u * diag.asDiagonal() * u.adjoint());
  }
  return out;
}

/// Dense shift z_var on the scalar box {0..d}^n in lexicographic order
/// (first variable slowest), for brute-force comparisons.
inline Matrix lex_shift(int n, int d, int var) {
  const int side = d + 1;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= side;
  int stride = 1;
  for (int i = n - 1; i > var; --i) stride *= side;
  Matrix s = Matrix::Zero(total, total);
  for (int idx = 0; idx < total; ++idx) {
    const int k = (idx / stride) % side;
    if (k < d) s(idx + stride, idx) = 1.0;
  }
  return s;
}

}  // namespace oracle
