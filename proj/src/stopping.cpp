#include "mwlab/stopping.hpp"

#include <algorithm>
#include <limits>

namespace mwlab {

namespace {

/// Maximal strict descendants of `top` satisfying `selected`, in pre-order.
template <class Pred>
std::vector<int> maximal_descendants(const DyadicLattice& lat, int top, Pred&& selected) {
  std::vector<int> out;
  std::vector<int> stack(lat.cube(top).children.rbegin(), lat.cube(top).children.rend());
  while (!stack.empty()) {
    const int q = stack.back();
    stack.pop_back();
    if (selected(q)) {
      out.push_back(q);
      continue;
    }
    const auto& kids = lat.cube(q).children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

/// D(top) minus every cube inside a member of `stops`.
std::vector<int> free_descendants(const DyadicLattice& lat, int top, const std::vector<int>& stops) {
  std::vector<bool> stopped(lat.size(), false);
  for (int s : stops) stopped[s] = true;
  std::vector<int> out;
  std::vector<int> stack{top};
  while (!stack.empty()) {
    const int q = stack.back();
    stack.pop_back();
    if (stopped[q]) continue;
    out.push_back(q);
    const auto& kids = lat.cube(q).children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

long cells_of(const DyadicLattice& lat, const std::vector<int>& cubes) {
  long total = 0;
  for (int q : cubes) total += static_cast<long>(lat.cube(q).cell_count());
  return total;
}

CellSet difference(const CellSet& a, const std::vector<int>& removed_cubes, const DyadicLattice& lat) {
  std::vector<int> removed;
  for (int j : removed_cubes) removed.insert(removed.end(), lat.cube(j).cells.begin(), lat.cube(j).cells.end());
  removed = make_cell_set(std::move(removed));
  CellSet out;
  std::set_difference(a.begin(), a.end(), removed.begin(), removed.end(), std::back_inserter(out));
  return out;
}

}  // namespace

StoppingLayers stopping_time(const ReducingTable& u, const ReducingTable& v, int root, double lambda) {
  if (!(lambda > 1.0)) throw ConfigError("stopping threshold lambda must exceed 1");
  if (&u.lattice() != &v.lattice() && !(u.lattice().grid() == v.lattice().grid() &&
                                        u.lattice().shift() == v.lattice().shift()))
    throw SizeError("stopping_time: reducing tables live on different lattices");
  const DyadicLattice& lat = u.lattice();
  StoppingLayers out;
  out.lattice = u.lattice_ptr();
  out.root = root;
  out.lambda = lambda;
  std::vector<int> current{root};
  while (!current.empty()) {
    out.generations.push_back(current);
    out.generation_cells.push_back(cells_of(lat, current));
    std::vector<int> next;
    std::vector<int> family;
    for (int top : current) {
      const Mat& ui = u[top].primary;
      const Mat& vi_inv = v[top].primary_inverse;
      auto selected = [&](int j) {
        return spectral_norm(ui * u[j].primary_inverse) > lambda || spectral_norm(vi_inv * v[j].primary) > lambda;
      };
      std::vector<int> stops = maximal_descendants(lat, top, selected);
      std::vector<int> free = free_descendants(lat, top, stops);
      family.insert(family.end(), free.begin(), free.end());
      next.insert(next.end(), stops.begin(), stops.end());
      out.children.emplace_back(top, std::move(stops));
    }
    out.families.push_back(std::move(family));
    current = std::move(next);
  }
  return out;
}

StoppingLayers stopping_time(const MatrixWeight& u, const MatrixWeight& v,
                             std::shared_ptr<const DyadicLattice> lattice, int root, double lambda, double p,
                             const ReducingOptions& options) {
  const ReducingTable tu(u, p, lattice, options);
  const ReducingTable tv(v, p, lattice, options);
  return stopping_time(tu, tv, root, lambda);
}

bool StoppingLayers::decays() const {
  const long total = root_cells();
  for (std::size_t j = 0; j < generation_cells.size(); ++j) {
    if (j >= 62) return generation_cells[j] == 0;
    if (generation_cells[j] * (1L << j) > total) return false;
  }
  return true;
}

bool StoppingLayers::sparse() const {
  const DyadicLattice& lat = *lattice;
  for (const auto& [k, stops] : children)
    if (2 * cells_of(lat, stops) > static_cast<long>(lat.cube(k).cell_count())) return false;
  return true;
}

bool StoppingLayers::partitions() const {
  const DyadicLattice& lat = *lattice;
  const auto all = lat.descendants(root);
  std::vector<int> hits(lat.size(), 0);
  for (const auto& f : families)
    for (int q : f) ++hits[q];
  for (int q : all)
    if (hits[q] != 1) return false;
  long total = 0;
  for (const auto& f : families) total += static_cast<long>(f.size());
  return total == static_cast<long>(all.size());
}

double SparseFamily::sparsity_constant() const {
  double worst = 1.0;
  for (const auto& m : members) {
    if (m.e.empty()) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, static_cast<double>(m.cells.size()) / static_cast<double>(m.e.size()));
  }
  return worst;
}

bool SparseFamily::disjoint() const {
  std::vector<int> all;
  for (const auto& m : members) all.insert(all.end(), m.e.begin(), m.e.end());
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

bool SparseFamily::sparse() const {
  return std::all_of(members.begin(), members.end(),
                     [](const SparseMember& m) { return m.cells.size() <= 2 * m.e.size(); });
}

SparseFamily sparse_from_stopping(const StoppingLayers& layers) {
  SparseFamily out;
  out.lattice = layers.lattice;
  const DyadicLattice& lat = *layers.lattice;
  for (const auto& [k, stops] : layers.children) {
    SparseMember m;
    m.cube = k;
    m.cells = make_cell_set(lat.cube(k).cells);
    m.e = difference(m.cells, stops, lat);
    out.members.push_back(std::move(m));
  }
  return out;
}

AutoSparseResult auto_sparse(const ReducingTable& u, const ReducingTable& v, int root, double lambda_seed,
                             double lambda_cap) {
  AutoSparseResult out;
  for (double lambda = lambda_seed;; lambda *= 2.0) {
    if (lambda > lambda_cap)
      throw NonTermination("stopping time: lambda exceeded cap " + std::to_string(lambda_cap));
    StoppingLayers layers = stopping_time(u, v, root, lambda);
    if (layers.decays() && layers.sparse()) {
      out.family = sparse_from_stopping(layers);
      out.layers = std::move(layers);
      out.lambda = lambda;
      return out;
    }
    ++out.doublings;
  }
}

SparseFamily principal_cubes(std::shared_ptr<const DyadicLattice> lattice, int root, std::span<const double> h) {
  SparseFamily out;
  out.lattice = lattice;
  const DyadicLattice& lat = *lattice;
  auto average = [&](int q) {
    double s = 0.0;
    for (int c : lat.cube(q).cells) s += h[c];
    return s / static_cast<double>(lat.cube(q).cell_count());
  };
  std::vector<int> current{root};
  while (!current.empty()) {
    std::vector<int> next;
    for (int top : current) {
      const double threshold = 2.0 * average(top);
      std::vector<int> stops = maximal_descendants(lat, top, [&](int j) { return average(j) > threshold; });
      SparseMember m;
      m.cube = top;
      m.cells = make_cell_set(lat.cube(top).cells);
      m.e = difference(m.cells, stops, lat);
      out.members.push_back(std::move(m));
      next.insert(next.end(), stops.begin(), stops.end());
    }
    current = std::move(next);
  }
  return out;
}

}  // namespace mwlab
