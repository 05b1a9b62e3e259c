#pragma once

// ||T||_{L^p(U) -> L^p(V)} = ||V^{1/p} T U^{-1/p}||_{L^p -> L^p}.

#include "mwlab/operators.hpp"

#include <cstdint>
#include <string>

namespace mwlab {

struct NormEstimate {
  enum class Mode { exact_p2, lower_bound };
  double value = 0.0;
  Mode mode = Mode::exact_p2;
  int iterations = 0;
  VectorField witness;  // unit-norm input in L^p(U)
  double residual = 0.0;
  bool converged = true;

  std::string mode_name() const { return mode == Mode::exact_p2 ? "exact-p2" : "lower-bound"; }
};

struct NormOptions {
  int restarts = 32;
  int max_iterations = 400;      // Lanczos steps
  int ascent_iterations = 5000;  // dual-map ascent steps per restart
  double tolerance = 1e-10;
  std::uint64_t seed = 0x6d776c6162ull;
};

/// Largest singular value of f -> V^{1/2} T U^{-1/2} f (Lanczos on the
/// normal operator with full reorthogonalisation).
NormEstimate opnorm_p2(const LinearOperator& t, const MatrixWeight& u, const MatrixWeight& v,
                       const NormOptions& options = {});

/// Best value of ||V^{1/p} T U^{-1/p} f||_p / ||f||_p over deterministic
/// restarts of the monotone dual-map ascent. Never exceeds the true norm.
NormEstimate opnorm_lower(const LinearOperator& t, const MatrixWeight& u, const MatrixWeight& v, double p,
                          const NormOptions& options = {});

/// ||[M_B, T (x) I]||_{L^p(U) -> L^p(V)}: exact at p = 2, lower bound otherwise.
NormEstimate commutator_norm(const MatrixField& b, const Czo& t, const MatrixWeight& u, const MatrixWeight& v,
                             double p, const NormOptions& options = {});

/// ||V^{1/p} T U^{-1/p} f||_p / ||f||_p for one input.
double norm_ratio(const LinearOperator& t, const MatrixWeight& u, const MatrixWeight& v, double p,
                  const VectorField& f);

}  // namespace mwlab
