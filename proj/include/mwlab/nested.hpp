#pragma once

// Mixed-norm cell averages avg_outer (avg_inner ||K||^a)^(b/a) over one cube.

#include <cmath>
#include <span>
#include <vector>

namespace mwlab::detail {

/// |t|^e for a squared magnitude t = |.|^2, avoiding pow on common exponents.
inline double pow_from_sq(double sq, double e) {
  if (e == 2.0) return sq;
  if (e == 1.0) return std::sqrt(sq);
  if (e == 4.0) return sq * sq;
  return std::pow(sq, 0.5 * e);
}

inline double pow_positive(double value, double e) {
  if (e == 1.0) return value;
  if (e == 0.5) return std::sqrt(value);
  if (e == 2.0) return value * value;
  return std::pow(value, e);
}

/// avg_{x in cells} ( avg_{y in cells} K(x,y)^inner )^(outer/inner), where
/// norm_sq(x, y) returns K(x,y)^2. When swap is set the averaging variables
/// exchange roles: avg_y (avg_x K(x,y)^inner)^(outer/inner).
template <class NormSq>
double mixed_mean(std::span<const int> cells, NormSq&& norm_sq, double inner, double outer,
                  bool swap = false) {
  const double count = static_cast<double>(cells.size());
  double total = 0.0;
  for (int a : cells) {
    double row = 0.0;
    for (int b : cells) row += pow_from_sq(swap ? norm_sq(b, a) : norm_sq(a, b), inner);
    total += pow_positive(row / count, outer / inner);
  }
  return total / count;
}

}  // namespace mwlab::detail
