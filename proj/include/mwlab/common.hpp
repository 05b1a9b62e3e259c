#pragma once

// Shared numeric vocabulary for the matrix-weight laboratory.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwlab {

using cplx = std::complex<double>;

/// Largest per-cell matrix the library handles (block fields are 2m x 2m).
inline constexpr int kMaxMatrixSize = 8;

using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxMatrixSize, kMaxMatrixSize>;
using Vec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxMatrixSize, 1>;
using RVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxMatrixSize, 1>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration / input parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Incompatible grid or matrix sizes.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A cell matrix that is not Hermitian positive definite within the caps.
class WeightError : public Error {
 public:
  WeightError(const std::string& what, int cell) : Error(what), cell_(cell) {}
  int cell() const { return cell_; }

 private:
  int cell_;
};

/// An iterative construction exceeded its configured cap.
class NonTermination : public Error {
 public:
  using Error::Error;
};

inline double conjugate_exponent(double p) { return p / (p - 1.0); }

/// Operator (spectral) norm of a small complex matrix.
double spectral_norm(const Mat& a);

/// Squared spectral norm; avoids the square root in hot loops.
double spectral_norm_sq(const Mat& a);

struct HermitianEig {
  RVec values;
  Mat vectors;
};

HermitianEig hermitian_eig(const Mat& h);

/// V diag(f(lambda)) V^* for a precomputed decomposition.
Mat hermitian_apply(const HermitianEig& eig, const std::function<double(double)>& f);

/// Hermitian power of a positive definite matrix.
Mat hermitian_power(const Mat& h, double s);

/// Deterministic generator; distributions are implemented here so that
/// streams are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  int integer(int lo, int hi);  // inclusive
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Mixes a base seed with a stream index (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Deterministic low-discrepancy unit vectors in C^n (Halton points pushed
/// through Box-Muller and normalised).
std::vector<Vec> sphere_directions(int n, int count);

/// Worker count: MWLAB_THREADS if set and positive, else hardware default.
int thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads.
/// Callers store results by index, so reductions stay deterministic. Calls
/// made from inside a worker run serially.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace mwlab
