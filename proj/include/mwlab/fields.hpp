#pragma once

// Piecewise-constant fields on the cell grid: matrix fields (symbols, block
// fields), vector fields (the functions f of L^p(W)) and positive definite
// matrix weights.

#include "mwlab/common.hpp"
#include "mwlab/dyadic.hpp"

#include <span>
#include <vector>

namespace mwlab {

/// Per-cell rows x cols complex matrix. No definiteness assumed.
class MatrixField {
 public:
  MatrixField() = default;
  MatrixField(const GridSpec& grid, int rows, int cols);
  MatrixField(const GridSpec& grid, std::vector<Mat> cells);

  static MatrixField constant(const GridSpec& grid, const Mat& value);

  const GridSpec& grid() const { return grid_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int cell_count() const { return static_cast<int>(cells_.size()); }
  const Mat& operator[](int c) const { return cells_[c]; }
  Mat& operator[](int c) { return cells_[c]; }
  const std::vector<Mat>& cells() const { return cells_; }

  /// Unweighted average over a set of cells.
  Mat average(std::span<const int> cells) const;
  MatrixField adjoint() const;
  MatrixField scaled(cplx factor) const;
  MatrixField plus(const MatrixField& other) const;

 private:
  GridSpec grid_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Mat> cells_;
};

/// Per-cell complex n-vector, stored cell-major.
class VectorField {
 public:
  VectorField() = default;
  VectorField(const GridSpec& grid, int n);
  VectorField(const GridSpec& grid, int n, std::vector<cplx> data);

  const GridSpec& grid() const { return grid_; }
  int size() const { return n_; }
  int cell_count() const { return grid_.cell_count(); }
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }
  Eigen::Map<Eigen::VectorXcd> flat() { return {data_.data(), static_cast<Eigen::Index>(data_.size())}; }
  Eigen::Map<const Eigen::VectorXcd> flat() const {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }

  Vec at(int cell) const;
  void set(int cell, const Vec& v);
  cplx& operator()(int cell, int component) { return data_[static_cast<std::size_t>(cell) * n_ + component]; }
  cplx operator()(int cell, int component) const {
    return data_[static_cast<std::size_t>(cell) * n_ + component];
  }
  Vec average(std::span<const int> cells) const;
  /// (sum_cells |f(x)|^p * cell volume)^(1/p), Euclidean norm inside a cell.
  double lp_norm(double p) const;
  /// Unweighted L^2 pairing <f, g> = int f . conj(g).
  cplx inner(const VectorField& g) const;

 private:
  GridSpec grid_;
  int n_ = 0;
  std::vector<cplx> data_;
};

/// Per-cell product M(x) f(x).
VectorField multiply(const MatrixField& m, const VectorField& f);

/// Hermitian positive definite matrix field with cached spectral data.
class MatrixWeight {
 public:
  static constexpr double kDefaultConditionCap = 1e12;

  MatrixWeight() = default;
  /// Validates and symmetrises each cell; throws WeightError naming the
  /// first offending cell.
  MatrixWeight(const GridSpec& grid, std::vector<Mat> cells,
               double condition_cap = kDefaultConditionCap);

  static MatrixWeight identity(const GridSpec& grid, int n);
  static MatrixWeight scalar(const GridSpec& grid, std::span<const double> values);

  const GridSpec& grid() const { return grid_; }
  int size() const { return n_; }
  int cell_count() const { return static_cast<int>(cells_.size()); }
  const Mat& operator[](int c) const { return cells_[c]; }
  const HermitianEig& eig(int c) const { return eigs_[c]; }
  double condition_number(int c) const;

  /// W^s per cell via the cached spectral decomposition.
  MatrixWeight power(double s) const;
  MatrixWeight scaled(double factor) const;
  /// Conjugation by one fixed unitary: W -> Q W Q^*.
  MatrixWeight conjugated(const Mat& unitary) const;
  MatrixField as_field() const { return MatrixField(grid_, cells_); }
  Mat average(std::span<const int> cells) const;

 private:
  GridSpec grid_;
  int n_ = 0;
  std::vector<Mat> cells_;
  std::vector<HermitianEig> eigs_;
};

MatrixWeight matrix_power(const MatrixWeight& w, double s);

}  // namespace mwlab
