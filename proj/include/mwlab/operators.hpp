#pragma once

// Periodic Hilbert/Riesz multipliers, commutators, averaging operators, the
// Haar system of a lattice, paraproducts, maximal functions, Carleson
// sequences and sparse operators.

#include "mwlab/dyadic.hpp"
#include "mwlab/fields.hpp"
#include "mwlab/stopping.hpp"
#include "mwlab/weights.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mwlab {

struct Czo {
  enum class Kind { hilbert, riesz };
  Kind kind = Kind::hilbert;
  int axis = 0;  // Riesz direction, 0-based

  static Czo hilbert() { return {Kind::hilbert, 0}; }
  static Czo riesz(int axis) { return {Kind::riesz, axis}; }
  std::string name() const;
};

/// Fourier multiplier value at signed integer frequency (k1, k2).
cplx czo_multiplier(const Czo& t, int k1, int k2, int dimension);

/// (T (x) I_n) f, or 1_E T 1_E f when a restriction is given.
VectorField apply_czo(const Czo& t, const VectorField& f, const std::optional<CellSet>& restriction = std::nullopt);

/// B (T f) - T (B f).
VectorField commutator(const MatrixField& b, const Czo& t, const VectorField& f);

/// 1_E avg_E f.
VectorField averaging(const CellSet& e, const VectorField& f);

/// 1_E f.
VectorField restrict_to(const CellSet& e, const VectorField& f);

/// A bounded linear map between vector fields on one grid, with its adjoint
/// for the unweighted L^2 pairing.
struct LinearOperator {
  GridSpec grid;
  int in_size = 1;
  int out_size = 1;
  std::function<VectorField(const VectorField&)> apply;
  std::function<VectorField(const VectorField&)> adjoint;

  static LinearOperator identity(const GridSpec& grid, int n);
  static LinearOperator zero(const GridSpec& grid, int n);
  static LinearOperator multiplication(const MatrixField& m);
  static LinearOperator czo(const GridSpec& grid, int n, const Czo& t);
  static LinearOperator commutator(const MatrixField& b, const Czo& t);
  static LinearOperator averaging(const GridSpec& grid, int n, const CellSet& e);
  /// 1_E A 1_E.
  LinearOperator restricted(const CellSet& e) const;
  /// (this) after (first).
  LinearOperator after(const LinearOperator& first) const;
  LinearOperator adjoint_operator() const;
};

/// Haar coefficients X_Q^eps = <X, h_Q^eps> over cubes of levels 0..L-1,
/// plus the global mean. Coefficients are n-vectors (entries of a matrix
/// field are flattened column-major).
struct HaarCoefficients {
  std::shared_ptr<const DyadicLattice> lattice;
  int n = 1;
  Eigen::VectorXcd mean;
  /// coefficients[cube][eps - 1]; empty for level-L cubes.
  std::vector<std::vector<Eigen::VectorXcd>> coefficients;

  int signatures() const { return (1 << lattice->grid().dimension) - 1; }
};

/// h_Q^eps as per-cell values (zero outside Q). eps in 1..2^d-1.
std::vector<double> haar_function(const DyadicLattice& lattice, int cube, int eps);
/// Integer signs of h_Q^eps (+-1 on Q, 0 elsewhere).
std::vector<int> haar_signs(const DyadicLattice& lattice, int cube, int eps);

HaarCoefficients haar_transform(const VectorField& f, std::shared_ptr<const DyadicLattice> lattice);
HaarCoefficients haar_transform(const MatrixField& b, std::shared_ptr<const DyadicLattice> lattice);
VectorField inverse_haar(const HaarCoefficients& coefficients);
MatrixField inverse_haar_matrix(const HaarCoefficients& coefficients, int rows, int cols);

/// Zero coefficient set (n = 1) on a lattice, to be filled by callers.
HaarCoefficients zero_haar(std::shared_ptr<const DyadicLattice> lattice, int n = 1);

/// pi g = sum_{Q, eps} (m_Q g) a_Q^eps h_Q^eps for scalar coefficients a
/// (n = 1), applied componentwise to g.
VectorField paraproduct(const HaarCoefficients& a, const VectorField& g);

/// M'_U f(x) = max over cubes Q of the lattice containing x of
/// m_Q |U_Q U^{-1/p} f|.
std::vector<double> goldberg_maximal(const MatrixWeight& u, double p, const VectorField& f,
                                     const ReducingTable& table);

/// Dyadic maximal function of a nonnegative cell function over one lattice.
std::vector<double> dyadic_maximal(const DyadicLattice& lattice, std::span<const double> g);

struct CarlesonSequence {
  std::shared_ptr<const DyadicLattice> lattice;
  std::vector<double> a;  // per cube of the lattice, nonnegative
};

/// ||A||_*^2 = sup_J |J|^{-1} sum_{Q in D(J)} a_Q^2.
double carleson_norm_sq(const CarlesonSequence& a);
inline double carleson_norm(const CarlesonSequence& a) { return std::sqrt(carleson_norm_sq(a)); }

/// (int (sum_Q [a_Q m_Q |U_Q U^{-1/p} f|]^2 / |Q| 1_Q)^{p/2})^{1/p}.
double carleson_embedding(const CarlesonSequence& a, const MatrixWeight& u, double p, const VectorField& f,
                          const ReducingTable& table);

/// The Haar coefficient field tilde A = sum_Q sum_eps a_Q h_Q^eps as coefficients.
HaarCoefficients carleson_symbol(const CarlesonSequence& a);

/// Per-cube kernel k_Q(x, y) for sparse_apply; |k| <= 1 is checked.
using SparseKernel = std::function<cplx(int member, int x, int y)>;

/// sum_Q 1_Q(x) avg_{y in Q} k_Q(x,y) (B(x) - B(y)) f(y).
VectorField sparse_apply(const SparseFamily& s, const MatrixField& b, const VectorField& f,
                         const SparseKernel& kernel = nullptr);

/// P_R B = sum over level-R cubes I of 1_I m_I B (unshifted lattice).
MatrixField project_PR(const MatrixField& b, int level);

}  // namespace mwlab
