#pragma once

// Young functions, Luxemburg averages and the bump constants.

#include "mwlab/dyadic.hpp"
#include "mwlab/fields.hpp"
#include "mwlab/weights.hpp"

#include <span>
#include <string>
#include <vector>

namespace mwlab {

class YoungFunction {
 public:
  enum class Kind { power, power_log_bump };

  /// C(t) = t^r / r.
  static YoungFunction power(double r);
  /// C(t) = t^r log(e + t)^delta.
  static YoungFunction power_log_bump(double r, double delta);

  double operator()(double t) const;
  double derivative(double t) const;
  /// Conjugate C*(s) = sup_t (s t - C(t)).
  double conjugate(double s) const;

  Kind kind() const { return kind_; }
  double exponent() const { return r_; }
  double delta() const { return delta_; }
  std::string describe() const;

 private:
  YoungFunction(Kind kind, double r, double delta) : kind_(kind), r_(r), delta_(delta) {}
  Kind kind_;
  double r_;
  double delta_;
};

/// The bumps C = t^p log(e+t)^{p-1+eta}, D = t^{p'} log(e+t)^{p'-1+eta};
/// eta > 0 keeps their conjugates in B_{p'} and B_p respectively.
std::pair<YoungFunction, YoungFunction> bump_pair(double p, double eta);

/// inf { lambda > 0 : avg C(|f| / lambda) <= 1 }, relative accuracy ~1e-12.
double luxemburg(std::span<const double> values, const YoungFunction& c);
/// Same, restricted to the cells of one cube.
double luxemburg(std::span<const double> field, const YoungFunction& c, const DyadicCube& q);

struct BumpReport {
  double kappa1 = 0.0, kappa2 = 0.0;
  double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0, mu4 = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0;  // min(mu1, mu2), min(mu3, mu4)
  std::size_t argmax_kappa1 = 0, argmax_kappa2 = 0;
};

/// kappa_1 = sup_Q || ||K(x,y)||_{C_x,Q} ||_{D_y,Q}, kappa_2 with the order
/// swapped, K(x,y) = V^{1/p}(x)(B(x)-B(y))U^{-1/p}(y); mu_1..mu_4 replace
/// B(x)-B(y) by B(x)-m_Q B (with E, F) or B(y)-m_Q B (with C, D).
BumpReport bump_constants(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                          const YoungFunction& c, const YoungFunction& d, const YoungFunction& e,
                          const YoungFunction& f, const CubeFamily& cubes);

/// kappa_1 and kappa_2 only (the mu terms skipped).
BumpReport kappa_constants(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                           const YoungFunction& c, const YoungFunction& d, const CubeFamily& cubes);

}  // namespace mwlab
