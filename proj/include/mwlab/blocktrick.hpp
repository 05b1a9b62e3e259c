#pragma once

// The block field Phi = [[V^{1/p}, V^{1/p} B], [0, U^{1/p}]] and the
// one-weight reduction W = (Phi^* Phi)^{p/2}.

#include "mwlab/dyadic.hpp"
#include "mwlab/fields.hpp"
#include "mwlab/weights.hpp"

#include <utility>
#include <vector>

namespace mwlab {

struct BlockField {
  GridSpec grid;
  int m = 1;  // blocks are m x m, Phi is 2m x 2m
  double p = 2.0;
  MatrixField phi;
  MatrixField phi_inverse;  // closed form [[V^{-1/p}, -B U^{-1/p}], [0, U^{-1/p}]]
  MatrixField b;
  MatrixWeight u, v;
  /// max over cells of the entrywise relative residual of Phi Phi^{-1} - I
  double inverse_residual = 0.0;
};

/// Throws WeightError naming the cell if the closed-form inverse fails 1e-10.
BlockField build_phi(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p);

/// (Phi^* Phi)^{p/2} per cell.
MatrixWeight build_w(const BlockField& phi, double p);

/// Cell pairs used by identity checks: all pairs of the union of the family
/// when it has at most 4096 cells, else 2^16 deterministic pseudo-random pairs.
std::vector<std::pair<int, int>> sample_pairs(const CubeFamily& cubes, std::uint64_t seed = 0);

struct PhiIdentityReport {
  std::size_t pairs = 0;
  double inverse_residual = 0.0;
  /// max entrywise relative residual of Phi(x) Phi(y)^{-1} against its blocks
  double block_residual = 0.0;
  /// max relative gap between ||Phi(x) Phi(y)^{-1}|| and ||W^{1/p}(x) W^{-1/p}(y)||
  double polar_residual = 0.0;
  /// max of ||upper-right block|| - ||Phi(x) Phi(y)^{-1}||, relative; <= 0 expected
  double sandwich_excess = 0.0;
};

PhiIdentityReport phi_identity_check(const BlockField& phi, const CubeFamily& cubes);

struct TriangleReport {
  double p = 2.0;
  double factor = 1.0;  // 3^{p/p'}
  double ap_w = 0.0;
  double ap_u = 0.0;
  double ap_v = 0.0;
  double tilde_power = 0.0;  // bmo_tilde(B)^p
  /// max over cubes of (local W - factor (local U + local V + local tilde^p)) / max(1, rhs)
  double local_excess = 0.0;
  /// [W] / ([U] + [V] + tilde^p): the two-sided comparability constant
  double ratio = 0.0;
  /// [W] >= max([U], [V], tilde^p) with slack (relative, <= 0 expected)
  double lower_excess = 0.0;
  std::size_t worst_cube = 0;
};

TriangleReport ap_triangle_check(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                                 const CubeFamily& cubes);

struct RescalingPoint {
  double r = 1.0;
  double ap_w = 0.0;
  double rhs = 0.0;  // [U] + [V] + r^p tilde^p
  double ratio = 0.0;
};

/// B -> r B for each r.
std::vector<RescalingPoint> rescaling_sweep(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v,
                                            double p, const CubeFamily& cubes, const std::vector<double>& rs);

}  // namespace mwlab
