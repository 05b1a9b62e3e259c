#include "mwlab/generators.hpp"
#include "mwlab/orlicz.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mwlab;

namespace {

MatrixWeight rotated(const GridSpec& g, int n, std::uint64_t seed) {
  WeightSpec s;
  s.kind = "rotated";
  s.amplitude = 0.8;
  s.angle_amplitude = 1.5;
  return generate_weight(g, n, s, seed);
}

MatrixField symbol(const GridSpec& g, int n, std::uint64_t seed) {
  SymbolSpec s;
  s.kind = "smooth";
  s.complex = true;
  return generate_symbol(g, n, s, seed);
}

double power_norm(const std::vector<double>& f, double r) {
  double sum = 0.0;
  for (double x : f) sum += std::pow(std::abs(x), r);
  return std::pow(sum / static_cast<double>(f.size()) / r, 1.0 / r);
}

// Nested power-Luxemburg norm of |K(x, y)| over one cube, inner over x when inner_x.
template <class Kernel>
double nested_power(const std::vector<int>& cells, double r_inner, double r_outer, bool inner_x, Kernel&& k) {
  std::vector<double> outer;
  for (int a : cells) {
    std::vector<double> inner;
    for (int b : cells) inner.push_back(inner_x ? k(b, a) : k(a, b));
    outer.push_back(power_norm(inner, r_inner));
  }
  return power_norm(outer, r_outer);
}

template <class Kernel>
double nested_power_oracle(const CubeFamily& cubes, double r_inner, double r_outer, bool inner_x, Kernel&& k) {
  double best = 0.0;
  for (std::size_t i = 0; i < cubes.size(); ++i)
    best = std::max(best, nested_power(cubes[i].cells, r_inner, r_outer, inner_x, k));
  return best;
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Young, PowerValuesAndConjugate) {
  const YoungFunction c = YoungFunction::power(3.0);
  EXPECT_NEAR(c(2.0), 8.0 / 3.0, 1e-14);
  EXPECT_NEAR(c.derivative(2.0), 4.0, 1e-12);
  const double rc = 1.5;
  for (double s : {0.1, 0.7, 1.0, 2.5}) EXPECT_NEAR(c.conjugate(s), std::pow(s, rc) / rc, 1e-9 * (1.0 + s));
}

TEST(Young, YoungInequalityHolds) {
  for (const YoungFunction& c : {YoungFunction::power(2.0), YoungFunction::power(1.5),
                                 YoungFunction::power_log_bump(2.0, 1.2), YoungFunction::power_log_bump(3.0, 0.5)})
    for (double s : {0.05, 0.5, 1.0, 3.0, 10.0})
      for (double t : {0.01, 0.3, 1.0, 2.0, 7.0}) EXPECT_LE(s * t, c(t) + c.conjugate(s) + 1e-9 * (1.0 + s * t));
}

TEST(Luxemburg, PowerClosedForm) {
  const std::vector<double> ones(16, 1.0);
  EXPECT_NEAR(luxemburg(ones, YoungFunction::power(2.0)), 1.0 / std::sqrt(2.0), 1e-12);
  const std::vector<double> f{0.3, -1.2, 2.0, 0.0, 5.5, 0.01};
  for (double r : {1.5, 2.0, 3.0}) EXPECT_LT(relative(luxemburg(f, YoungFunction::power(r)), power_norm(f, r)), 1e-11);
}

TEST(Luxemburg, ZeroAndHomogeneity) {
  const std::vector<double> zero(8, 0.0);
  EXPECT_EQ(luxemburg(zero, YoungFunction::power_log_bump(2.0, 1.0)), 0.0);
  std::vector<double> f{0.2, 1.0, 3.0, 0.5}, g = f;
  for (double& x : g) x *= 7.0;
  const YoungFunction c = YoungFunction::power_log_bump(2.5, 1.5);
  EXPECT_LT(relative(luxemburg(g, c), 7.0 * luxemburg(f, c)), 1e-10);
}

TEST(Luxemburg, BumpIncreasesWithDelta) {
  const std::vector<double> f{0.2, 1.0, 3.0, 0.5, 9.0};
  double last = luxemburg(f, YoungFunction::power(2.0));
  for (double delta : {0.0, 0.5, 1.0, 2.0}) {
    const double now = luxemburg(f, YoungFunction::power_log_bump(2.0, delta));
    EXPECT_GE(now, last * (1.0 - 1e-12));
    last = now;
  }
}

TEST(Bump, ConstantSymbolGivesZero) {
  const GridSpec g{1, 3};
  Rng rng(3);
  const MatrixField b = MatrixField::constant(g, random_matrix(2, 2, rng));
  const auto [c, d] = bump_pair(2.0, 0.5);
  const BumpReport r = bump_constants(b, rotated(g, 2, 1), rotated(g, 2, 2), 2.0, c, d, c, d, CubeFamily::all_shifts(g));
  EXPECT_EQ(r.kappa1, 0.0);
  EXPECT_EQ(r.kappa2, 0.0);
  EXPECT_LT(std::max({r.mu1, r.mu2, r.mu3, r.mu4}), 1e-12);
}

TEST(Bump, PowerFunctionsMatchNestedLoops) {
  const GridSpec g{1, 3};
  const double p = 3.0, rc = 2.5, rd = 1.8;
  const MatrixField b = symbol(g, 2, 5);
  const MatrixWeight u = rotated(g, 2, 6), v = rotated(g, 2, 7);
  const CubeFamily cubes = CubeFamily::all_shifts(g);
  const YoungFunction c = YoungFunction::power(rc), d = YoungFunction::power(rd);
  const YoungFunction e = YoungFunction::power(2.0), f = YoungFunction::power(4.0);
  const BumpReport r = bump_constants(b, u, v, p, c, d, e, f, cubes);

  std::vector<oracle::Dense> vp, un;
  for (int x = 0; x < g.cell_count(); ++x) {
    vp.push_back(oracle::hpow(v[x], 1.0 / p));
    un.push_back(oracle::hpow(u[x], -1.0 / p));
  }
  const auto kappa = [&](int x, int y) { return oracle::opnorm(vp[x] * (b[x] - b[y]) * un[y]); };
  EXPECT_LT(relative(r.kappa1, nested_power_oracle(cubes, rc, rd, true, kappa)), 1e-9);
  EXPECT_LT(relative(r.kappa2, nested_power_oracle(cubes, rd, rc, false, kappa)), 1e-9);

  double mu1 = 0, mu2 = 0, mu3 = 0, mu4 = 0;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const auto& cells = cubes[i].cells;
    oracle::Dense mean = oracle::Dense::Zero(2, 2);
    for (int x : cells) mean += b[x];
    mean /= static_cast<double>(cells.size());
    const auto left = [&](int x, int y) { return oracle::opnorm(vp[x] * (b[x] - mean) * un[y]); };
    const auto right = [&](int x, int y) { return oracle::opnorm(vp[x] * (b[y] - mean) * un[y]); };
    mu1 = std::max(mu1, nested_power(cells, 2.0, 4.0, true, left));
    mu2 = std::max(mu2, nested_power(cells, 4.0, 2.0, false, left));
    mu3 = std::max(mu3, nested_power(cells, rc, rd, true, right));
    mu4 = std::max(mu4, nested_power(cells, rd, rc, false, right));
  }
  EXPECT_LT(relative(r.mu1, mu1), 1e-9);
  EXPECT_LT(relative(r.mu2, mu2), 1e-9);
  EXPECT_LT(relative(r.mu3, mu3), 1e-9);
  EXPECT_LT(relative(r.mu4, mu4), 1e-9);
  EXPECT_DOUBLE_EQ(r.lambda1, std::min(r.mu1, r.mu2));
  EXPECT_DOUBLE_EQ(r.lambda2, std::min(r.mu3, r.mu4));
}

TEST(Bump, KappaBoundedByMeanSplit) {
  // B(x) - B(y) = (B(x) - m) - (B(y) - m), and nested Luxemburg norms are norms
  const GridSpec g{1, 4};
  const MatrixField b = symbol(g, 2, 11);
  const MatrixWeight u = rotated(g, 2, 12), v = rotated(g, 2, 13);
  const auto [c, d] = bump_pair(2.0, 0.5);
  const BumpReport r = bump_constants(b, u, v, 2.0, c, d, c, d, CubeFamily::all_shifts(g));
  EXPECT_GT(r.kappa1, 0.0);
  EXPECT_LE(r.kappa1, (r.mu1 + r.mu3) * (1.0 + 1e-9));
  EXPECT_LE(r.kappa2, (r.mu2 + r.mu4) * (1.0 + 1e-9));
}

TEST(Bump, KappaIncreasesWithEta) {
  const GridSpec g{1, 3};
  const MatrixField b = symbol(g, 2, 21);
  const MatrixWeight u = rotated(g, 2, 22), v = rotated(g, 2, 23);
  const CubeFamily cubes = CubeFamily::all_shifts(g);
  double last1 = 0.0, last2 = 0.0;
  for (double eta : {0.1, 0.5, 1.0, 2.0}) {
    const auto [c, d] = bump_pair(2.0, eta);
    const BumpReport r = kappa_constants(b, u, v, 2.0, c, d, cubes);
    EXPECT_GE(r.kappa1, last1 * (1.0 - 1e-12));
    EXPECT_GE(r.kappa2, last2 * (1.0 - 1e-12));
    last1 = r.kappa1;
    last2 = r.kappa2;
    EXPECT_EQ(r.mu1, 0.0);
  }
}
