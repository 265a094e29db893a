#include "dcmodel/hardy.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dcmodel;

TEST(Hardy, CountsAndGradedOrder) {
  const TruncatedHardySpace s(3, 2, 2);
  EXPECT_EQ(s.num_indices(), 27);
  EXPECT_EQ(s.dim(), 54);
  const auto& idx = s.indices();
  EXPECT_EQ(idx.front(), MultiIndex({0, 0, 0}));
  EXPECT_EQ(idx[1], MultiIndex({0, 0, 1}));
  EXPECT_EQ(idx[3], MultiIndex({1, 0, 0}));
  EXPECT_EQ(idx.back(), MultiIndex({2, 2, 2}));
  for (std::size_t p = 1; p < idx.size(); ++p) {
    const int a = idx[p - 1][0] + idx[p - 1][1] + idx[p - 1][2];
    const int b = idx[p][0] + idx[p][1] + idx[p][2];
    EXPECT_LE(a, b);
  }
}

TEST(Hardy, PositionInvertsIndexAt) {
  const TruncatedHardySpace s(2, 4, 1);
  for (Index p = 0; p < s.num_indices(); ++p) EXPECT_EQ(s.position(s.index_at(p)), p);
  EXPECT_EQ(s.position({5, 0}), -1);
  EXPECT_THROW(s.position({1}), Error);
}

TEST(Hardy, FibersRunAlongOneVariable) {
  const TruncatedHardySpace s(2, 3, 1);
  const auto& f = s.fibers(1);
  ASSERT_EQ(static_cast<Index>(f.size()), s.num_indices());
  for (Index fib = 0; fib < s.fiber_count(); ++fib) {
    const MultiIndex base = s.index_at(f[static_cast<std::size_t>(fib * 4)]);
    for (int t = 0; t <= 3; ++t) {
      const MultiIndex k = s.index_at(f[static_cast<std::size_t>(fib * 4 + t)]);
      EXPECT_EQ(k[0], base[0]);
      EXPECT_EQ(k[1], t);
    }
  }
}

TEST(Hardy, ShiftMatchesLexicographicOracle) {
  const TruncatedHardySpace s(2, 3, 1);
  for (std::size_t var = 0; var < 2; ++var) {
    const ComplexMatrix graded = ComplexMatrix(shift_matrix(s, var));
    const ComplexMatrix lex = oracle::lex_shift(2, 3, static_cast<int>(var));
    // Permutation from graded positions to lexicographic positions.
    ComplexMatrix perm = ComplexMatrix::Zero(s.dim(), s.dim());
    for (Index p = 0; p < s.num_indices(); ++p) {
      const auto& k = s.index_at(p);
      perm(k[0] * 4 + k[1], p) = 1.0;
    }
    EXPECT_EQ((perm * graded * perm.adjoint() - lex).norm(), 0.0);
  }
}

TEST(Hardy, ShiftsCommuteAndCoshiftIsAdjoint) {
  const TruncatedHardySpace s(2, 3, 2);
  const ComplexMatrix a = ComplexMatrix(shift_matrix(s, 0));
  const ComplexMatrix b = ComplexMatrix(shift_matrix(s, 1));
  EXPECT_EQ((a * b - b * a).norm(), 0.0);
  EXPECT_EQ((ComplexMatrix(coshift_matrix(s, 0)) - a.adjoint()).norm(), 0.0);
  // Doubly commuting as well, even after truncation.
  EXPECT_EQ((a * b.adjoint() - b.adjoint() * a).norm(), 0.0);
}

TEST(Hardy, LocalOperatorMatchesExplicitKronecker) {
  const TruncatedHardySpace s(2, 2, 1);
  std::mt19937_64 rng(1);
  const ComplexMatrix block = random_gaussian(3, 3, rng);
  for (std::size_t var = 0; var < 2; ++var) {
    const LocalOperator op{var, block, 1, 1};
    const ComplexMatrix dense = op.dense(s);
    const ComplexMatrix want_lex = var == 0 ? kron(block, identity(3)) : kron(identity(3), block);
    for (Index p = 0; p < s.num_indices(); ++p) {
      for (Index q = 0; q < s.num_indices(); ++q) {
        const auto& a = s.index_at(p);
        const auto& b = s.index_at(q);
        EXPECT_EQ(dense(p, q), want_lex(a[0] * 3 + a[1], b[0] * 3 + b[1]));
      }
    }
  }
}

TEST(Hardy, LocalOperatorChangesCoefficientSpace) {
  const TruncatedHardySpace s(2, 1, 2);
  std::mt19937_64 rng(2);
  const LocalOperator op{0, random_gaussian(2 * 3, 2 * 2, rng), 2, 3};
  const ComplexMatrix x = random_gaussian(s.num_indices() * 2, 2, rng);
  EXPECT_EQ(op.apply(s, x).rows(), s.num_indices() * 3);
  const LocalOperator bad{0, random_gaussian(5, 4, rng), 2, 3};
  EXPECT_THROW(bad.apply(s, x), Error);
}

TEST(Hardy, OneVariableShift) {
  const ComplexMatrix s = one_variable_shift(3, 2);
  EXPECT_EQ(s.rows(), 8);
  EXPECT_EQ(s(2, 0), Complex(1.0));
  EXPECT_EQ(s(7, 5), Complex(1.0));
  EXPECT_EQ(s.bottomRows(2).rightCols(2).norm(), 0.0);
  EXPECT_EQ(s.block(0, 6, 8, 2).norm(), 0.0);
}

TEST(Hardy, SzegoKernelValues) {
  Point z(2), w(2);
  z << 0.5, Complex(0.0, 0.5);
  w << 0.5, Complex(0.0, 0.5);
  EXPECT_NEAR(std::abs(szego_kernel(z, w) - Complex(16.0 / 9.0)), 0.0, 1e-14);
  Point out(2);
  out << 1.0, 0.0;
  EXPECT_THROW(szego_kernel(out, w), Error);
}

TEST(Hardy, KernelVectorReproduces) {
  const TruncatedHardySpace s(2, 40, 2);
  Point w(2), z(2);
  w << Complex(0.3, 0.2), Complex(-0.4, 0.1);
  z << Complex(0.1, -0.3), Complex(0.2, 0.2);
  ComplexVector eta(2);
  eta << 1.0, Complex(0.0, -2.0);
  const ComplexVector k = kernel_vector(s, w, eta);
  const ComplexVector value = evaluate(s, k, z);
  EXPECT_LT((value - szego_kernel(z, w) * eta).norm(), 1e-12);
  // <f, S_w eta> = <f(w), eta>
  std::mt19937_64 rng(3);
  const ComplexVector f = random_gaussian(s.dim(), 1, rng).col(0);
  EXPECT_LT(std::abs(k.dot(f) - eta.dot(evaluate(s, f, w))), 1e-10);
}

TEST(Hardy, ConstantsProjectionByInclusionExclusion) {
  for (std::size_t n : {1u, 2u, 3u}) {
    const TruncatedHardySpace s(n, 3, 2);
    EXPECT_EQ(constants_projection_check(s), 0.0);
  }
}

TEST(Hardy, CoordinatesUpTo) {
  const TruncatedHardySpace s(2, 3, 2);
  EXPECT_EQ(s.coordinates_up_to(1).size(), 8u);
  EXPECT_EQ(static_cast<Index>(s.coordinates_up_to(3).size()), s.dim());
  const ComplexMatrix x = ComplexMatrix::Identity(s.dim(), 2);
  const auto rows = s.coordinates_up_to(1);
  EXPECT_EQ((embed_rows(select_rows(x, rows), rows, s.dim()) - x).norm(), 0.0);
}
