#pragma once

// Two-weight matrix BMO quantities.

#include "mwlab/dyadic.hpp"
#include "mwlab/fields.hpp"
#include "mwlab/weights.hpp"

#include <vector>

namespace mwlab {

/// Which matrices conjugate B - m_Q B in bmo_vu.
enum class BmoForm {
  reducing,    // V_Q (.) U_Q^{-1}
  power_mean,  // m_Q(V^{1/p}) (.) m_Q(U^{1/p})^{-1}
};

enum class Orientation { primal, dual };

struct BmoValue {
  double value = 0.0;  // the sup with its outer root
  double power = 0.0;  // value^p (the integrand sup before the root)
  std::size_t argmax = 0;
  std::vector<double> local;  // per cube, rooted
};

/// sup_Q (avg_Q ||V_Q (B - m_Q B) U_Q^{-1}||)^{1/p}.
BmoValue bmo_vu(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                const CubeFamily& cubes, BmoForm form = BmoForm::reducing, const ReducingOptions& options = {});

/// Primal: sup_Q (avg_x (avg_y ||V^{1/p}(x)(B(x)-B(y))U^{-1/p}(y)||^{p'})^{p/p'})^{1/p}.
/// Dual:   sup_Q (avg_y (avg_x ||...||^p)^{p'/p})^{1/p'}.
BmoValue bmo_tilde(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                   const CubeFamily& cubes, Orientation orientation = Orientation::primal);

struct BmoReport {
  CubeSup a, b, c, d, e;
  CubeSup lambda1, lambda2;
  /// Per-cube Hoelder factors: b_Q^p <= d_Q^p * holder_b[Q] and
  /// c_Q^{p'} <= e_Q^{p'} * holder_c[Q], with
  /// holder_b = avg_y ||U^{1/p}(y) U_Q^{-1}||^p and
  /// holder_c = avg_y ||V'_Q^{-1} V^{-1/p}(y)||^{p'}.
  std::vector<double> holder_b, holder_c;
  /// max over cubes of (lhs - rhs) / max(1, rhs) for the two chains.
  double holder_b_excess = 0.0;
  double holder_c_excess = 0.0;
  std::vector<std::string> argmax_cubes;  // a..e
};

BmoReport jn_quantities(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                        const CubeFamily& cubes, const ReducingOptions& options = {});

/// sup_Q nu(Q)^{-1} int_Q |b - m_Q b| with nu = (u / v)^{1/p}; scalar inputs.
BmoValue bloom_scalar(std::span<const double> b, std::span<const double> u, std::span<const double> v, double p,
                      const CubeFamily& cubes);

}  // namespace mwlab
