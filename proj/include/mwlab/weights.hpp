#pragma once

// Matrix A_p and scalar A_infinity characteristics, reducing matrices.

#include "mwlab/dyadic.hpp"
#include "mwlab/fields.hpp"

#include <memory>
#include <span>
#include <vector>

namespace mwlab {

struct CubeSup {
  double value = 0.0;
  std::size_t argmax = 0;     // index into the cube family
  std::vector<double> local;  // per-cube values, family order
};

/// Local A_p expression on one cube from precomputed P = W^{1/p}, N = W^{-1/p}:
/// avg_x (avg_y ||P(x) N(y)||^{p'})^{p/p'}. The dual flag evaluates
/// avg_y (avg_x ||P(x) N(y)||^p)^{p'/p} instead.
double ap_local(const MatrixWeight& pos, const MatrixWeight& neg, double p,
                std::span<const int> cells, bool dual = false);

/// sup over the family of the local A_p expression of W.
CubeSup ap_characteristic(const MatrixWeight& w, double p, const CubeFamily& cubes, bool dual = false);

/// sup_e [ |W^{1/p} e|^p ]_{A_inf}, with M replaced by the max of the 2^d
/// shifted dyadic maximal operators. directions = 0 picks 2 n^2.
double ainfty_scalar(const MatrixWeight& w, double p, const CubeFamily& cubes, int directions = 0);

/// Classical scalar A_inf characteristic of one nonnegative cell function.
double ainfty_of(std::span<const double> w, const GridSpec& grid, const CubeFamily& cubes);

struct ReducingOptions {
  int directions = 0;         // 0: 64 n^2
  bool certify = true;
  double fit_tolerance = 0.05;  // delta of the certification window
};

/// Reducing matrices of one cube: |U_Q e| ~ (avg |W^{1/p} e|^p)^{1/p} and
/// |U'_Q e| ~ (avg |W^{-1/p} e|^{p'})^{1/p'}.
struct ReducingPair {
  double p = 2.0;
  Mat primary;          // U_Q
  Mat dual;             // U'_Q
  Mat primary_inverse;
  Mat dual_inverse;
  // extremes of |U_Q e| / rho(e) over the sampled directions
  double min_ratio = 1.0;
  double max_ratio = 1.0;
  double dual_min_ratio = 1.0;
  double dual_max_ratio = 1.0;
  int directions = 0;
  bool certified = true;
};

ReducingPair reducing_matrices(const MatrixWeight& w, double p, std::span<const int> cells,
                               const ReducingOptions& options = {});
ReducingPair reducing_matrices(const MatrixWeight& w, double p, const DyadicCube& q,
                               const ReducingOptions& options = {});

/// Reducing pairs for every cube of one lattice, built from additive
/// per-cell direction sums.
class ReducingTable {
 public:
  ReducingTable(const MatrixWeight& w, double p, std::shared_ptr<const DyadicLattice> lattice,
                const ReducingOptions& options = {});

  const ReducingPair& operator[](int cube) const { return pairs_[cube]; }
  const DyadicLattice& lattice() const { return *lattice_; }
  const std::shared_ptr<const DyadicLattice>& lattice_ptr() const { return lattice_; }
  double p() const { return p_; }
  bool all_certified() const;

 private:
  std::shared_ptr<const DyadicLattice> lattice_;
  double p_;
  std::vector<ReducingPair> pairs_;
};

/// One table per lattice of the family, same order as family.lattices().
std::vector<ReducingTable> reducing_tables(const MatrixWeight& w, double p, const CubeFamily& family,
                                           const ReducingOptions& options = {});

}  // namespace mwlab
