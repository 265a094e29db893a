#include "dcmodel/blh.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dcmodel;

namespace {

ComplexMatrix scalar(double a) { return ComplexMatrix::Constant(1, 1, a); }

ModelSpaces model_of(const ContractionTuple& t, int d) {
  return model_space(build_dilation(t, defect_operators(t), d));
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::NumericalFailure;
}

ComplexMatrix monomials(const TruncatedHardySpace& s, const std::vector<MultiIndex>& ks) {
  ComplexMatrix q = ComplexMatrix::Zero(s.dim(), static_cast<Index>(ks.size()));
  for (std::size_t c = 0; c < ks.size(); ++c) q(s.position(ks[c]), static_cast<Index>(c)) = 1.0;
  return q;
}

}  // namespace

TEST(Fiber, ZeroTupleFiberIsMultiplesOfZ) {
  const ModelSpaces ms = model_of(ContractionTuple({scalar(0.0), scalar(0.0)}), 4);
  for (std::size_t i = 0; i < 2; ++i) {
    const InvariantSubspace f = fiber_extract(ms, i);
    EXPECT_FALSE(f.empty);
    EXPECT_EQ(f.rank(), 4);
    ComplexMatrix want = ComplexMatrix::Zero(5, 5);
    want.diagonal() << 0, 1, 1, 1, 1;
    EXPECT_LT(oracle::norm2(f.basis * f.basis.adjoint() - want), 1e-14);
    EXPECT_LT(f.reconstruction_residual, 1e-14);
    EXPECT_LT(f.shift_invariance_residual, 1e-14);

    const ComplexMatrix w = wandering_basis(f);
    ASSERT_EQ(w.cols(), 1);
    const InnerColumnSet phi = inner_from_wandering(w, i, 4, 1, ms.margin);
    EXPECT_NEAR(std::abs(phi.scalar(1) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(phi.scalar(0)), 0.0, 1e-14);
    EXPECT_LT(phi.isometry_drift, 1e-14);
  }
}

TEST(Fiber, MoebiusComplementIsTheKernelDirection) {
  const double a = 0.5;
  const ModelSpaces ms = model_of(ContractionTuple({scalar(a)}), 30);
  const InvariantSubspace f = fiber_extract(ms, 0);
  const int keep = 30 - ms.margin + 1;
  // Q = span{k_a}, k_a = sum a^k z^k.
  ComplexMatrix k(31, 1);
  for (int t = 0; t <= 30; ++t) k(t, 0) = std::pow(a, t) * std::sqrt(1 - a * a);
  const ComplexMatrix gap = identity(31) - f.basis * f.basis.adjoint() - k * k.adjoint();
  EXPECT_LT(oracle::norm2(gap.topLeftCorner(keep, keep)), 1e-8);
  EXPECT_LT(f.reconstruction_residual, 1e-6);

  const InnerColumnSet phi = inner_from_wandering(wandering_basis(f), 0, 30, 1, ms.margin);
  ASSERT_EQ(phi.inner_dim, 1);
  std::vector<Complex> got;
  for (int m = 0; m <= 30; ++m) got.push_back(phi.scalar(m));
  EXPECT_LT(oracle::phase_aligned_error(got, oracle::mobius_coefficients(a, 30), 30 - ms.margin), 1e-8);
}

TEST(Fiber, EmptyFiberGivesZeroInner) {
  const TruncatedHardySpace space(2, 4, 1);
  ModelSpaces ms{space, 2, {}, {}, {}, {}, {}, {}, {}, 0.0, {}};
  for (std::size_t i = 0; i < 2; ++i) {
    ms.projections.push_back(LocalOperator{i, ComplexMatrix::Zero(5, 5), 1, 1});
    ms.restricted.push_back(ms.projections.back());
  }
  const InvariantSubspace f = fiber_extract(ms, 0);
  EXPECT_TRUE(f.empty);
  EXPECT_EQ(wandering_basis(f).cols(), 0);
  const InnerColumnSet phi = inner_from_wandering(wandering_basis(f), 0, 4, 1, 2);
  EXPECT_EQ(phi.inner_dim, 0);
  EXPECT_EQ(inner_range_projection(phi, 4, 1, 2).norm(), 0.0);
  // S = 0, and the reconstruction from zero inner functions is exact.
  EXPECT_LT(reconstruct_S_check({phi, inner_from_wandering(ComplexMatrix(5, 0), 1, 4, 1, 2)}, ms), 1e-15);
}

TEST(Wandering, ShiftInvariantSpanOfZSquared) {
  InvariantSubspace f{0, 5, 1, ComplexMatrix::Zero(6, 4), false, 0.0, 0.0};
  for (int t = 2; t <= 5; ++t) f.basis(t, t - 2) = 1.0;
  const ComplexMatrix w = wandering_basis(f);
  ASSERT_EQ(w.cols(), 1);
  EXPECT_NEAR(std::abs(w(2, 0) - 1.0), 0.0, 1e-14);
}

TEST(Wandering, WrongLengthRejected) {
  EXPECT_EQ(kind_of([] { inner_from_wandering(ComplexMatrix::Zero(7, 1), 0, 5, 1, 2); }), ErrorKind::DimensionMismatch);
}

TEST(Reconstruct, ScalarPair) {
  const auto t = make_tensor_tuple({scalar(0.5), scalar(0.6)});
  const ModelSpaces ms = model_of(t, 20);
  const BlhResult blh = run_blh(ms);
  ASSERT_EQ(blh.inners.size(), 2u);
  EXPECT_LT(blh.reconstruction, 1e-5);
  const double params[] = {0.5, 0.6};
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<Complex> got;
    for (int m = 0; m <= 20; ++m) got.push_back(blh.inners[i].scalar(m));
    EXPECT_LT(oracle::phase_aligned_error(got, oracle::mobius_coefficients(params[i], 20), 20 - ms.margin), 1e-6);
    EXPECT_LT(blh.inners[i].isometry_drift, 1e-4);
  }
}

TEST(Reconstruct, MatrixValuedTensorTuple) {
  const auto t = make_tensor_tuple({make_random_pure_contraction(2, 0.4, 31), make_random_pure_contraction(2, 0.35, 32)});
  const DilationMap l = build_dilation_adaptive(t, defect_operators(t));
  const ModelSpaces ms = model_space(l);
  const BlhResult blh = run_blh(ms);
  EXPECT_LT(blh.reconstruction, 1e-5);
  for (const auto& f : blh.fibers) EXPECT_LT(f.reconstruction_residual, 1e-6);
  for (const auto& phi : blh.inners) EXPECT_LT(phi.isometry_drift, 1e-5);
}

TEST(RankOne, MonomialRoundTrip) {
  const TruncatedHardySpace s(2, 4, 1);
  const RankOneVerdict v = rankone_corollary_check(monomials(s, {{0, 0}, {1, 0}}), s);
  EXPECT_TRUE(v.doubly_commuting);
  EXPECT_TRUE(v.pure);
  EXPECT_LT(v.doubly_commuting_residual, 1e-12);
  EXPECT_EQ(v.defect_rank, 1);
  EXPECT_EQ(v.constants_rank, 1);
  ASSERT_EQ(v.thetas.size(), 2u);
  for (int m = 0; m <= 4; ++m) {
    EXPECT_NEAR(std::abs(v.thetas[0].scalar(m) - (m == 2 ? 1.0 : 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(v.thetas[1].scalar(m) - (m == 1 ? 1.0 : 0.0)), 0.0, 1e-12);
  }
  EXPECT_LT(v.q_match, 1e-12);
  EXPECT_LT(v.complement_match, 1e-12);
  EXPECT_LT(v.reconstruction, 1e-12);
}

TEST(RankOne, DiagonalSubspaceIsNotDoublyCommuting) {
  const TruncatedHardySpace s(2, 4, 1);
  ComplexMatrix q = monomials(s, {{0, 0}, {1, 0}});
  q(s.position({0, 1}), 1) = 1.0;
  q.col(1) /= std::sqrt(2.0);
  const RankOneVerdict v = rankone_corollary_check(q, s);
  EXPECT_FALSE(v.doubly_commuting);
  EXPECT_NEAR(v.doubly_commuting_residual, 0.5, 1e-12);
  EXPECT_EQ(v.violating_i, 0u);
  EXPECT_EQ(v.violating_j, 1u);
  EXPECT_LT(v.commuting_residual, 1e-12);
  EXPECT_EQ(v.defect_rank, -1);
}

TEST(RankOne, Errors) {
  const TruncatedHardySpace s(2, 3, 1);
  EXPECT_EQ(kind_of([&] { rankone_corollary_check(monomials(s, {{1, 0}}), s); }), ErrorKind::NotCoinvariant);
  EXPECT_EQ(kind_of([&] { rankone_corollary_check(ComplexMatrix(s.dim(), 0), s); }), ErrorKind::NotCoinvariant);
  const TruncatedHardySpace vec(2, 3, 2);
  EXPECT_EQ(kind_of([&] { rankone_corollary_check(ComplexMatrix::Zero(vec.dim(), 1), vec); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { rankone_corollary_check(ComplexMatrix::Zero(5, 1), s); }), ErrorKind::DimensionMismatch);
}

TEST(SliceCoordinates, FollowOneVariable) {
  const TruncatedHardySpace s(2, 2, 2);
  const auto c = slice_coordinates(s, 1, {1, 0});
  ASSERT_EQ(c.size(), 6u);
  EXPECT_EQ(c[0], s.offset(s.position({1, 0}), 0));
  EXPECT_EQ(c[5], s.offset(s.position({1, 2}), 1));
}
