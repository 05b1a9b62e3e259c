#include "mwlab/generators.hpp"
#include "mwlab/weights.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace mwlab;

namespace {

MatrixWeight two_value(const GridSpec& g, double left, double right) {
  std::vector<double> w(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) w[c] = c < g.cell_count() / 2 ? left : right;
  return MatrixWeight::scalar(g, w);
}

MatrixWeight rotated(const GridSpec& g, int n, std::uint64_t seed, double amplitude = 0.8) {
  WeightSpec s;
  s.kind = "rotated";
  s.amplitude = amplitude;
  s.angle_amplitude = 1.5;
  return generate_weight(g, n, s, seed);
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(MatrixPower, DiagonalAndIdentity) {
  const GridSpec g{1, 0};
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const MatrixWeight w(g, std::vector<Mat>(3, d));
  const MatrixWeight h = matrix_power(w, 0.5);
  EXPECT_NEAR(std::abs(h[0](0, 0)), 2.0, 1e-14);
  EXPECT_NEAR(std::abs(h[0](1, 1)), 3.0, 1e-14);
  EXPECT_NEAR(std::abs(h[0](0, 1)), 0.0, 1e-14);
  const MatrixWeight id = matrix_power(MatrixWeight::identity(g, 3), 0.5);
  EXPECT_LT((id[1] - Mat::Identity(3, 3)).norm(), 1e-15);
}

TEST(MatrixPower, RoundTrip) {
  const MatrixWeight w = rotated(GridSpec{1, 2}, 2, 7);
  const MatrixWeight back = matrix_power(matrix_power(w, 1.0 / 3.0), 3.0);
  for (int c = 0; c < w.cell_count(); ++c) EXPECT_LT((back[c] - w[c]).norm() / w[c].norm(), 1e-10);
}

TEST(MatrixWeight, RejectsIndefiniteCellNamingIt) {
  const GridSpec g{1, 0};
  std::vector<Mat> cells(3, Mat::Identity(2, 2));
  cells[2](1, 1) = -1.0;
  try {
    MatrixWeight w(g, cells);
    FAIL();
  } catch (const WeightError& e) {
    EXPECT_EQ(e.cell(), 2);
  }
}

TEST(Ap, IdentityIsOne) {
  for (double p : {1.5, 2.0, 3.0}) {
    const GridSpec g{2, 2};
    EXPECT_NEAR(ap_characteristic(MatrixWeight::identity(g, 2), p, CubeFamily::all_shifts(g)).value, 1.0, 1e-14);
  }
}

TEST(Ap, TwoValueScalarWeight) {
  const GridSpec g{1, 1};
  const MatrixWeight w = two_value(g, 1.0, 4.0);
  const CubeSup s = ap_characteristic(w, 2.0, CubeFamily::single(g));
  EXPECT_NEAR(s.value, 2.5 * 0.625, 1e-14);
}

TEST(Ap, DiagonalEmbeddingTakesPairwiseMaxima) {
  const GridSpec g{1, 1};
  std::vector<Mat> cells;
  for (int c = 0; c < g.cell_count(); ++c) {
    Mat m = Mat::Identity(2, 2);
    m(0, 0) = c < 3 ? 1.0 : 4.0;
    cells.push_back(m);
  }
  // ||diag(a, 1)|| = max(a, 1) per pair: avg over the four half-pairs of max(w(x)/w(y), 1)
  const double want = (1.0 + 1.0 + 4.0 + 1.0) / 4.0;
  EXPECT_NEAR(ap_characteristic(MatrixWeight(g, cells), 2.0, CubeFamily::single(g)).value, want, 1e-14);
}

TEST(Ap, MatchesNestedLoopOracle) {
  const GridSpec g{1, 2};
  const MatrixWeight w = rotated(g, 2, 3, 1.0);
  const CubeFamily cubes = CubeFamily::all_shifts(g);
  for (double p : {1.5, 2.0, 3.0}) {
    const CubeSup s = ap_characteristic(w, p, cubes);
    double want = 0.0;
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      const double local = oracle::ap_local(w, p, cubes[i].cells);
      EXPECT_LT(relative(s.local[i], local), 1e-10);
      want = std::max(want, local);
    }
    EXPECT_LT(relative(s.value, want), 1e-10);
  }
}

TEST(Ap, ScaleAndUnitaryInvariance) {
  const GridSpec g{1, 3};
  const MatrixWeight w = rotated(g, 2, 11);
  const CubeFamily cubes = CubeFamily::all_shifts(g);
  const double base = ap_characteristic(w, 3.0, cubes).value;
  EXPECT_LT(relative(ap_characteristic(w.scaled(17.0), 3.0, cubes).value, base), 1e-12);
  Rng rng(5);
  const Mat q = Eigen::HouseholderQR<Mat>(random_matrix(2, 2, rng)).householderQ();
  EXPECT_LT(relative(ap_characteristic(w.conjugated(q), 3.0, cubes).value, base), 1e-10);
}

TEST(Ap, DualityAtPTwoForMatrices) {
  const GridSpec g{1, 4};
  const CubeFamily cubes = CubeFamily::all_shifts(g);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const MatrixWeight w = rotated(g, 2, seed);
    const double a = ap_characteristic(w, 2.0, cubes).value;
    EXPECT_LT(relative(ap_characteristic(w.power(-1.0), 2.0, cubes).value, a), 1e-12);
  }
}

TEST(Ap, DualityForScalarsAtAnyP) {
  const GridSpec g{1, 4};
  const CubeFamily cubes = CubeFamily::all_shifts(g);
  for (double p : {1.5, 3.0}) {
    const double pp = p / (p - 1.0);
    const MatrixWeight w = rotated(g, 1, 4);
    const double a = ap_characteristic(w, p, cubes).value;
    EXPECT_LT(relative(ap_characteristic(w.power(-pp / p), pp, cubes).value, std::pow(a, pp / p)), 1e-12);
  }
}

TEST(Ap, DualOrderMatchesDualWeight) {
  // the dual averaging order of W at p equals [W^{-p'/p}]_{A_{p'}} raised to p/p'
  const GridSpec g{1, 3};
  const CubeFamily cubes = CubeFamily::all_shifts(g);
  const MatrixWeight w = rotated(g, 2, 9);
  const double p = 3.0, pp = 1.5;
  const double dual = ap_characteristic(w, p, cubes, true).value;
  const double other = ap_characteristic(w.power(-pp / p), pp, cubes).value;
  EXPECT_LT(relative(dual, other), 1e-10);
}

TEST(Ainfty, IdentityAndScaling) {
  const GridSpec g{1, 3};
  const CubeFamily cubes = CubeFamily::all_shifts(g);
  EXPECT_NEAR(ainfty_scalar(MatrixWeight::identity(g, 2), 2.0, cubes), 1.0, 1e-12);
  const MatrixWeight w = rotated(g, 2, 2);
  EXPECT_LT(relative(ainfty_scalar(w.scaled(3.0), 2.0, cubes), ainfty_scalar(w, 2.0, cubes)), 1e-12);
}

TEST(Ainfty, TwoValueWeightMatchesMaximalOracle) {
  const GridSpec g{1, 2};
  const MatrixWeight w = two_value(g, 1.0, 4.0);
  const CubeFamily cubes = CubeFamily::all_shifts(g);
  std::vector<double> values(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) values[c] = std::real(w[c](0, 0));
  // brute force: int_Q max_{R containing x} avg_R (w 1_Q) over w(Q), R ranging over every shifted cube
  double want = 0.0;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const CellSet q = make_cell_set(cubes[i].cells);
    double num = 0.0, mass = 0.0;
    for (int x : q) {
      double best = 0.0;
      for (std::size_t j = 0; j < cubes.size(); ++j) {
        const CellSet r = make_cell_set(cubes[j].cells);
        if (!std::binary_search(r.begin(), r.end(), x)) continue;
        double sum = 0.0;
        for (int y : r)
          if (std::binary_search(q.begin(), q.end(), y)) sum += values[y];
        best = std::max(best, sum / r.size());
      }
      num += best;
      mass += values[x];
    }
    want = std::max(want, num / mass);
  }
  EXPECT_LT(relative(ainfty_scalar(w, 2.0, cubes), want), 1e-12);
}

TEST(Reducing, IdentityAndTwoValueClosedForms) {
  const GridSpec g{1, 1};
  const CubeFamily family = CubeFamily::single(g);
  const ReducingPair id = reducing_matrices(MatrixWeight::identity(g, 2), 3.0, family[0]);
  EXPECT_LT((id.primary - Mat::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT((id.dual - Mat::Identity(2, 2)).norm(), 1e-12);
  const ReducingPair r = reducing_matrices(two_value(g, 1.0, 4.0), 2.0, family[0]);
  EXPECT_NEAR(std::abs(r.primary(0, 0)), std::sqrt(2.5), 1e-14);
  EXPECT_NEAR(std::abs(r.dual(0, 0)), std::sqrt(0.625), 1e-14);
}

TEST(Reducing, ScalarIsExactForAllP) {
  const GridSpec g{1, 3};
  const MatrixWeight w = rotated(g, 1, 8);
  const CubeFamily family = CubeFamily::single(g);
  const DyadicCube& q = family[0];
  for (double p : {1.5, 3.0}) {
    const ReducingPair r = reducing_matrices(w, p, q);
    double m = 0.0;
    for (int c : q.cells) m += std::real(w[c](0, 0));
    EXPECT_LT(relative(std::abs(r.primary(0, 0)), std::pow(m / q.cells.size(), 1.0 / p)), 1e-12);
  }
}

TEST(Reducing, PTwoIsSquareRootOfAverage) {
  const GridSpec g{1, 3};
  const MatrixWeight w = rotated(g, 3, 21);
  const CubeFamily family = CubeFamily::single(g);
  const DyadicCube& q = family[0];
  const ReducingPair r = reducing_matrices(w, 2.0, q);
  oracle::Dense avg = oracle::Dense::Zero(3, 3), inv = oracle::Dense::Zero(3, 3);
  for (int c : q.cells) {
    avg += w[c];
    inv += oracle::hpow(w[c], -1.0);
  }
  avg /= static_cast<double>(q.cells.size());
  inv /= static_cast<double>(q.cells.size());
  // |U_Q e| = |avg^{1/2} e| for all e, i.e. U_Q^* U_Q = avg
  EXPECT_LT((oracle::Dense(r.primary.adjoint() * r.primary) - avg).norm() / avg.norm(), 1e-12);
  EXPECT_LT((oracle::Dense(r.dual.adjoint() * r.dual) - inv).norm() / inv.norm(), 1e-12);
}

TEST(Reducing, GeneralPIsCertifiedNormEquivalence) {
  const GridSpec g{1, 3};
  const MatrixWeight w = rotated(g, 2, 4);
  const CubeFamily family = CubeFamily::single(g);
  const ReducingPair r = reducing_matrices(w, 3.0, family[0]);
  EXPECT_TRUE(r.certified);
  EXPECT_LE(r.min_ratio, 1.0);
  EXPECT_GE(r.max_ratio, 1.0);
  // John-ellipsoid window for n = 2
  EXPECT_GE(r.min_ratio, 1.0 / std::sqrt(2.0));
  EXPECT_LE(r.max_ratio, std::sqrt(2.0));
}

TEST(Generators, Determinism) {
  const GridSpec g{2, 2};
  WeightSpec s;
  s.kind = "lognormal";
  s.sigma = 0.7;
  const MatrixWeight a = generate_weight(g, 2, s, 99), b = generate_weight(g, 2, s, 99);
  for (int c = 0; c < g.cell_count(); ++c) EXPECT_EQ(a[c], b[c]);
}

TEST(Generators, DegenerateKindsGiveIdentity) {
  const GridSpec g{1, 2};
  WeightSpec s;
  s.kind = "lognormal";
  s.sigma = 0.0;
  const MatrixWeight a = generate_weight(g, 2, s, 1);
  s = WeightSpec{};
  s.kind = "power";
  s.alpha = {0.0};
  const MatrixWeight b = generate_weight(g, 2, s, 1);
  for (int c = 0; c < g.cell_count(); ++c) {
    EXPECT_LT((a[c] - Mat::Identity(2, 2)).norm(), 1e-15);
    EXPECT_LT((b[c] - Mat::Identity(2, 2)).norm(), 1e-15);
  }
}

TEST(Generators, SmoothFieldIsDeterministicAndDepthStable) {
  const VectorField a = smooth_field(GridSpec{1, 4}, 2, 5), b = smooth_field(GridSpec{1, 4}, 2, 5);
  EXPECT_EQ(a.data(), b.data());
  EXPECT_NE(a.data(), smooth_field(GridSpec{1, 4}, 2, 6).data());
  // refinements of one continuum function: the L^1 norms converge
  auto l1 = [](int depth) { return smooth_field(GridSpec{1, depth}, 2, 5).lp_norm(1.0); };
  EXPECT_LT(std::abs(l1(8) - l1(7)), std::abs(l1(4) - l1(3)));
  EXPECT_LT(std::abs(l1(8) / l1(3) - 1.0), 0.2);
  EXPECT_THROW(smooth_field(GridSpec{1, 2}, 1, 1, 0.6), ConfigError);
}
