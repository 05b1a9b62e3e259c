#include "mwlab/blocktrick.hpp"
#include "mwlab/generators.hpp"
#include "mwlab/norms.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mwlab;

namespace {

MatrixWeight rotated(const GridSpec& g, int n, std::uint64_t seed, double p = 2.0) {
  WeightSpec s;
  s.kind = "rotated";
  s.amplitude = 0.8;
  s.angle_amplitude = 1.5;
  return generate_weight(g, n, s, seed, p);
}

MatrixField symbol(const GridSpec& g, int n, std::uint64_t seed) {
  SymbolSpec s;
  s.kind = "smooth";
  s.complex = true;
  return generate_symbol(g, n, s, seed);
}

}  // namespace

TEST(BlockField, IdentityInputsGiveIdentity) {
  const GridSpec g{1, 2};
  const MatrixWeight id = MatrixWeight::identity(g, 2);
  const BlockField phi = build_phi(MatrixField(g, 2, 2), id, id, 3.0);
  for (int c = 0; c < g.cell_count(); ++c) {
    EXPECT_LT((phi.phi[c] - Mat::Identity(4, 4)).norm(), 1e-15);
    EXPECT_LT((phi.phi_inverse[c] - Mat::Identity(4, 4)).norm(), 1e-15);
  }
}

TEST(BlockField, ScalarUpperRightEntry) {
  const GridSpec g{1, 2};
  const double p = 3.0;
  std::vector<double> uw(g.cell_count()), vw(g.cell_count());
  MatrixField b(g, 1, 1);
  for (int c = 0; c < g.cell_count(); ++c) {
    uw[c] = 1.0 + 0.3 * c;
    vw[c] = 2.0 / (1.0 + c);
    b[c](0, 0) = cplx(std::sin(c), 0.5 * c);
  }
  const BlockField phi = build_phi(b, MatrixWeight::scalar(g, uw), MatrixWeight::scalar(g, vw), p);
  for (int x = 0; x < g.cell_count(); ++x)
    for (int y = 0; y < g.cell_count(); ++y) {
      const Mat m = phi.phi[x] * phi.phi_inverse[y];
      const cplx want = std::pow(vw[x], 1.0 / p) * (b[x](0, 0) - b[y](0, 0)) * std::pow(uw[y], -1.0 / p);
      EXPECT_LT(std::abs(m(0, 1) - want), 1e-12);
      EXPECT_NEAR(m(0, 0).real(), std::pow(vw[x] / vw[y], 1.0 / p), 1e-12);
      EXPECT_NEAR(m(1, 1).real(), std::pow(uw[x] / uw[y], 1.0 / p), 1e-12);
      EXPECT_LT(std::abs(m(1, 0)), 1e-15);
    }
}

TEST(BlockField, IdentityResiduals) {
  const GridSpec g{1, 4};
  for (double p : {2.0, 3.0, 1.5}) {
    const BlockField phi = build_phi(symbol(g, 2, 1), rotated(g, 2, 2, p), rotated(g, 2, 3, p), p);
    EXPECT_LE(phi.inverse_residual, 1e-10);
    const PhiIdentityReport r = phi_identity_check(phi, CubeFamily::all_shifts(g));
    EXPECT_EQ(r.pairs, static_cast<std::size_t>(g.cell_count() * g.cell_count()));
    EXPECT_LE(r.inverse_residual, 1e-10);
    EXPECT_LE(r.block_residual, 1e-10);
    EXPECT_LE(r.polar_residual, 1e-9);
    EXPECT_LE(r.sandwich_excess, 1e-10);
  }
}

TEST(BlockField, WeightAtTwoIsGram) {
  const GridSpec g{1, 3};
  const BlockField phi = build_phi(symbol(g, 2, 4), rotated(g, 2, 5), rotated(g, 2, 6), 2.0);
  const MatrixWeight w = build_w(phi, 2.0);
  for (int c = 0; c < g.cell_count(); ++c) {
    const Mat gram = phi.phi[c].adjoint() * phi.phi[c];
    EXPECT_LT((w[c] - gram).norm(), 1e-10 * gram.norm());
  }
}

TEST(BlockField, SamplePairsCoverSmallFamilies) {
  const GridSpec g{1, 2};
  const auto pairs = sample_pairs(CubeFamily::all_shifts(g));
  EXPECT_EQ(pairs.size(), static_cast<std::size_t>(g.cell_count() * g.cell_count()));
  EXPECT_EQ(sample_pairs(CubeFamily::all_shifts(g), 7), pairs);
}

TEST(BlockField, ConjugationNormsAgreeAtTwo) {
  // W^{1/2} = Q Phi with Q unitary per cell, so both conjugations of T (x) I have equal norms
  const GridSpec g{1, 3};
  const BlockField phi = build_phi(symbol(g, 1, 7), rotated(g, 1, 8), rotated(g, 1, 9), 2.0);
  const MatrixWeight w = build_w(phi, 2.0);
  const LinearOperator t = LinearOperator::czo(g, 2, Czo::hilbert());
  const double got = opnorm_p2(t, w, w).value;
  const oracle::Dense m =
      oracle::block_diagonal(phi.phi.cells()) * oracle::dense(t) * oracle::block_diagonal(phi.phi_inverse.cells());
  const double want = oracle::opnorm(m);
  EXPECT_NEAR(got, want, 1e-8 * want);
  EXPECT_LE(commutator_norm(phi.b, Czo::hilbert(), phi.u, phi.v, 2.0).value, got * (1.0 + 1e-8));
}

TEST(Triangle, LocalBoundsHold) {
  const GridSpec g{1, 4};
  for (double p : {2.0, 3.0}) {
    const TriangleReport r =
        ap_triangle_check(symbol(g, 2, 10), rotated(g, 2, 11, p), rotated(g, 2, 12, p), p, CubeFamily::all_shifts(g));
    EXPECT_NEAR(r.factor, std::pow(3.0, p - 1.0), 1e-12);
    EXPECT_LE(r.local_excess, 1e-9);
    EXPECT_LE(r.lower_excess, 1e-9);
    EXPECT_GE(r.ratio, 1.0 / 3.0);
    EXPECT_LE(r.ratio, r.factor * (1.0 + 1e-9));
  }
}

TEST(Triangle, RescalingStaysComparable) {
  const GridSpec g{1, 4};
  const double p = 2.0;
  const std::vector<double> rs{0.0, 0.5, 1.0, 4.0, 16.0};
  const auto sweep =
      rescaling_sweep(symbol(g, 2, 13), rotated(g, 2, 14), rotated(g, 2, 15), p, CubeFamily::all_shifts(g), rs);
  ASSERT_EQ(sweep.size(), rs.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    EXPECT_EQ(sweep[i].r, rs[i]);
    EXPECT_GE(sweep[i].ratio, 1.0 / 3.0);
    EXPECT_LE(sweep[i].ratio, 3.0 * (1.0 + 1e-9));
    if (i > 0) EXPECT_GE(sweep[i].ap_w, sweep[0].ap_w * (1.0 - 1e-9));
  }
}
