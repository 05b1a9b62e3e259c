#pragma once

// Two-weight stopping time and sparse families.

#include "mwlab/dyadic.hpp"
#include "mwlab/weights.hpp"

#include <memory>
#include <vector>

namespace mwlab {

struct StoppingLayers {
  std::shared_ptr<const DyadicLattice> lattice;
  int root = 0;
  double lambda = 0.0;
  /// generations[j] = J^j(I); generations[0] = {I}.
  std::vector<std::vector<int>> generations;
  /// families[j] = union of F(J) over J in J^j(I); together they partition D(I).
  std::vector<std::vector<int>> families;
  /// |union J^j(I)| in cells.
  std::vector<long> generation_cells;
  /// stopping children J(K) for every K appearing in some generation
  std::vector<std::pair<int, std::vector<int>>> children;

  long root_cells() const { return generation_cells.empty() ? 0 : generation_cells.front(); }
  /// |union J^j| <= 2^{-j} |I| for every j, in integer arithmetic.
  bool decays() const;
  /// Every member K satisfies |union J(K)| <= |K| / 2.
  bool sparse() const;
  /// Families are pairwise disjoint and exactly cover D(I).
  bool partitions() const;
};

/// J(I): maximal strict descendants J with ||U_I U_J^{-1}|| > lambda or
/// ||V_I^{-1} V_J|| > lambda, iterated to exhaustion.
StoppingLayers stopping_time(const ReducingTable& u, const ReducingTable& v, int root, double lambda);
StoppingLayers stopping_time(const MatrixWeight& u, const MatrixWeight& v,
                             std::shared_ptr<const DyadicLattice> lattice, int root, double lambda, double p,
                             const ReducingOptions& options = {});

struct SparseMember {
  int cube = 0;
  CellSet cells;  // Q
  CellSet e;      // E_Q
};

/// Sparse family drawn from one lattice.
struct SparseFamily {
  std::shared_ptr<const DyadicLattice> lattice;
  std::vector<SparseMember> members;

  /// max |Q| / |E_Q| (1 for a single full member, inf if some E_Q is empty).
  double sparsity_constant() const;
  bool disjoint() const;
  bool sparse() const;  // |Q| <= 2 |E_Q| for all members
};

/// Members are all generation cubes K with E_K = K minus the union of J(K).
SparseFamily sparse_from_stopping(const StoppingLayers& layers);

struct AutoSparseResult {
  StoppingLayers layers;
  SparseFamily family;
  double lambda = 0.0;
  int doublings = 0;
};

/// Doubles lambda from lambda_seed until decay and sparsity both hold;
/// throws NonTermination past lambda_cap.
AutoSparseResult auto_sparse(const ReducingTable& u, const ReducingTable& v, int root, double lambda_seed = 4.0,
                             double lambda_cap = 1048576.0);

/// Principal cubes of a nonnegative cell function h under one lattice root:
/// the children of a stopping cube P are the maximal J with avg_J h > 2 avg_P h.
SparseFamily principal_cubes(std::shared_ptr<const DyadicLattice> lattice, int root, std::span<const double> h);

}  // namespace mwlab
