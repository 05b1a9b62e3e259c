#pragma once

// Deterministic test-instance factories. Every generated field is a function
// of the cell centre (except the i.i.d. kinds), so the same seed at a finer
// depth samples the same underlying continuum object.

#include "mwlab/fields.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mwlab {

/// Random trigonometric polynomial on the torus with prescribed L^2 norm.
class SmoothFunction {
 public:
  SmoothFunction() = default;
  SmoothFunction(int dimension, int modes, double l2_norm, Rng& rng);
  double operator()(double x, double y = 0.0) const;

 private:
  struct Term {
    int k1, k2;
    double a, b;
  };
  std::vector<Term> terms_;
};

/// Distance on the torus between two points of [0,1)^d.
double torus_distance(std::array<double, 2> a, std::array<double, 2> b, int dimension);

struct WeightSpec {
  std::string kind = "identity";  // identity | power | rotated | lognormal | table
  double amplitude = 0.0;         // rotated: L^2 size of the log-eigenvalues
  double angle_amplitude = 0.0;   // rotated: L^2 size of the rotation angles
  int modes = 3;
  std::vector<double> alpha;      // power: one exponent per diagonal entry (or one for all)
  std::array<double, 2> center{0.5, 0.5};
  double sigma = 0.0;             // lognormal
  std::string path;               // table
};

MatrixWeight generate_weight(const GridSpec& grid, int n, const WeightSpec& spec, std::uint64_t seed,
                             double p = 2.0);

struct SymbolSpec {
  // constant | smooth | step | log | indicator | iid | table
  std::string kind = "smooth";
  double amplitude = 1.0;
  int modes = 3;
  bool complex = false;
  double low = 0.5;   // indicator interval [low, high) along the first axis
  double high = 1.0;
  std::array<double, 2> center{0.5, 0.5};
  std::string path;
};

MatrixField generate_symbol(const GridSpec& grid, int m, const SymbolSpec& spec, std::uint64_t seed);

/// Random complex vector field with i.i.d. Gaussian entries.
VectorField random_field(const GridSpec& grid, int n, std::uint64_t seed);

/// Position-defined complex field: a small trigonometric part plus a
/// |x - c|^{-singularity d} spike per component. singularity < 1/2 keeps it
/// in L^2; the spike makes principal-cube families non-trivial.
VectorField smooth_field(const GridSpec& grid, int n, std::uint64_t seed, double singularity = 0.45);

/// Random complex matrix with i.i.d. Gaussian entries.
Mat random_matrix(int rows, int cols, Rng& rng);

}  // namespace mwlab
