#include "mwlab/generators.hpp"
#include "mwlab/stopping.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace mwlab;

namespace {

MatrixWeight two_value(const GridSpec& g, double left, double right) {
  std::vector<double> w(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) w[c] = c < g.cell_count() / 2 ? left : right;
  return MatrixWeight::scalar(g, w);
}

MatrixWeight rough(const GridSpec& g, std::uint64_t seed) {
  WeightSpec s;
  s.kind = "rotated";
  s.amplitude = 1.5;
  s.angle_amplitude = 2.0;
  return generate_weight(g, 2, s, seed);
}

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Stopping, IdentityWeightsGiveOneGeneration) {
  const GridSpec g{2, 2};
  const auto lat = std::make_shared<const DyadicLattice>(g, Shift{0, 0});
  const MatrixWeight id = MatrixWeight::identity(g, 2);
  const StoppingLayers s = stopping_time(id, id, lat, 0, 1.5, 3.0);
  ASSERT_EQ(s.generations.size(), 1u);
  EXPECT_EQ(s.families[0].size(), static_cast<std::size_t>(lat->size()));
  const SparseFamily f = sparse_from_stopping(s);
  ASSERT_EQ(f.members.size(), 1u);
  EXPECT_EQ(f.members[0].e.size(), static_cast<std::size_t>(g.cell_count()));
  EXPECT_EQ(f.sparsity_constant(), 1.0);
}

TEST(Stopping, TwoValueWeightStopsAtBothChildren) {
  const GridSpec g{1, 1};
  const auto lat = std::make_shared<const DyadicLattice>(g, Shift{0, 0});
  const MatrixWeight w = two_value(g, 1.0, 4.0);
  const StoppingLayers s = stopping_time(w, w, lat, 0, 1.05, 2.0);
  ASSERT_GE(s.generations.size(), 2u);
  EXPECT_EQ(as_set(s.generations[1]), as_set({lat->level(1).begin(), lat->level(1).end()}));
}

TEST(Stopping, OneSidedThresholdSelectsOneChild) {
  // ||U_I U_J^{-1}|| = sqrt(2.5) on the left child and sqrt(2.5)/2 on the right one; V = identity
  const GridSpec g{1, 1};
  const auto lat = std::make_shared<const DyadicLattice>(g, Shift{0, 0});
  const StoppingLayers s =
      stopping_time(two_value(g, 1.0, 4.0), MatrixWeight::identity(g, 1), lat, 0, 1.5, 2.0);
  ASSERT_EQ(s.generations.size(), 2u);
  ASSERT_EQ(s.generations[1].size(), 1u);
  const DyadicCube& child = lat->cube(s.generations[1][0]);
  EXPECT_EQ(child.cells.front(), 0);
  const SparseFamily f = sparse_from_stopping(s);
  const auto root = std::find_if(f.members.begin(), f.members.end(), [](const SparseMember& m) { return m.cube == 0; });
  ASSERT_NE(root, f.members.end());
  EXPECT_EQ(root->e.size() * 2, root->cells.size());
  EXPECT_TRUE(f.sparse());
  EXPECT_EQ(f.sparsity_constant(), 2.0);
}

TEST(Stopping, UnreachableThresholdStopsNothing) {
  const GridSpec g{1, 4};
  const auto lat = std::make_shared<const DyadicLattice>(g, Shift{0, 0});
  const MatrixWeight u = rough(g, 1), v = rough(g, 2);
  const ReducingTable tu(u, 2.0, lat), tv(v, 2.0, lat);
  double worst = 0.0;
  for (int i = 0; i < lat->size(); ++i)
    for (int j = 0; j < lat->size(); ++j) {
      worst = std::max(worst, spectral_norm(tu[i].primary * tu[j].primary_inverse));
      worst = std::max(worst, spectral_norm(tv[i].primary_inverse * tv[j].primary));
    }
  EXPECT_EQ(stopping_time(tu, tv, 0, 2.0 * worst).generations.size(), 1u);
}

TEST(Stopping, AutoLambdaDecayPartitionAndSparsity) {
  for (int d : {1, 2})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const GridSpec g{d, d == 1 ? 5 : 3};
      for (const Shift& sh : all_shifts(d)) {
        const auto lat = std::make_shared<const DyadicLattice>(g, sh);
        const ReducingTable tu(rough(g, seed), 2.0, lat), tv(rough(g, seed + 100), 2.0, lat);
        const AutoSparseResult r = auto_sparse(tu, tv, 0);
        EXPECT_TRUE(r.layers.partitions());
        EXPECT_TRUE(r.layers.decays());
        EXPECT_TRUE(r.layers.sparse());
        EXPECT_TRUE(r.family.sparse());
        EXPECT_TRUE(r.family.disjoint());
        // exhaustive measure count of the generations
        for (std::size_t j = 0; j < r.layers.generations.size(); ++j) {
          std::set<int> cells;
          for (int q : r.layers.generations[j]) cells.insert(lat->cube(q).cells.begin(), lat->cube(q).cells.end());
          EXPECT_EQ(static_cast<long>(cells.size()), r.layers.generation_cells[j]);
          EXPECT_LE(cells.size() << j, static_cast<std::size_t>(g.cell_count()));
        }
      }
    }
}

TEST(Stopping, FamiliesCoverEveryDescendantOnce) {
  const GridSpec g{1, 5};
  const auto lat = std::make_shared<const DyadicLattice>(g, Shift{1, 0});
  const int root = lat->level(1)[0];
  const ReducingTable tu(rough(g, 7), 2.0, lat), tv(rough(g, 8), 2.0, lat);
  const StoppingLayers s = stopping_time(tu, tv, root, 1.3);
  std::vector<int> seen;
  for (const auto& fam : s.families) seen.insert(seen.end(), fam.begin(), fam.end());
  std::sort(seen.begin(), seen.end());
  auto desc = lat->descendants(root);
  std::sort(desc.begin(), desc.end());
  EXPECT_EQ(seen, desc);
}

TEST(Principal, CubesAreSparseAndDisjoint) {
  const GridSpec g{1, 6};
  const VectorField f = smooth_field(g, 1, 3);
  std::vector<double> h(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) h[c] = std::abs(f(c, 0));
  for (const Shift& sh : all_shifts(1)) {
    const SparseFamily fam = principal_cubes(std::make_shared<const DyadicLattice>(g, sh), 0, h);
    EXPECT_GT(fam.members.size(), 1u);
    EXPECT_TRUE(fam.sparse());
    EXPECT_TRUE(fam.disjoint());
    EXPECT_LE(fam.sparsity_constant(), 2.0);
  }
}
