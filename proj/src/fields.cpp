#include "mwlab/fields.hpp"

#include <cmath>
#include <string>

namespace mwlab {

MatrixField::MatrixField(const GridSpec& grid, int rows, int cols)
    : grid_(grid), rows_(rows), cols_(cols), cells_(grid.cell_count(), Mat::Zero(rows, cols)) {
  if (rows < 1 || cols < 1 || rows > kMaxMatrixSize || cols > kMaxMatrixSize)
    throw SizeError("matrix field size out of range");
}

MatrixField::MatrixField(const GridSpec& grid, std::vector<Mat> cells)
    : grid_(grid), cells_(std::move(cells)) {
  if (static_cast<int>(cells_.size()) != grid.cell_count())
    throw SizeError("matrix field: cell count does not match grid");
  rows_ = static_cast<int>(cells_.front().rows());
  cols_ = static_cast<int>(cells_.front().cols());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c].rows() != rows_ || cells_[c].cols() != cols_)
      throw SizeError("matrix field: inconsistent cell shape at cell " + std::to_string(c));
    if (!cells_[c].allFinite()) throw ConfigError("matrix field: non-finite entry at cell " + std::to_string(c));
  }
}

MatrixField MatrixField::constant(const GridSpec& grid, const Mat& value) {
  return MatrixField(grid, std::vector<Mat>(grid.cell_count(), value));
}

Mat MatrixField::average(std::span<const int> cells) const {
  if (cells.empty()) return Mat::Zero(rows_, cols_);
  // shifted by the first cell so a constant field averages to itself exactly
  const Mat& base = cells_[cells.front()];
  Mat sum = Mat::Zero(rows_, cols_);
  for (int c : cells) sum += cells_[c] - base;
  return base + sum / static_cast<double>(cells.size());
}

MatrixField MatrixField::adjoint() const {
  std::vector<Mat> out(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) out[c] = cells_[c].adjoint();
  return MatrixField(grid_, std::move(out));
}

MatrixField MatrixField::scaled(cplx factor) const {
  std::vector<Mat> out(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) out[c] = factor * cells_[c];
  return MatrixField(grid_, std::move(out));
}

MatrixField MatrixField::plus(const MatrixField& other) const {
  if (!(other.grid_ == grid_) || other.rows_ != rows_ || other.cols_ != cols_)
    throw SizeError("matrix field sum: shape mismatch");
  std::vector<Mat> out(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) out[c] = cells_[c] + other.cells_[c];
  return MatrixField(grid_, std::move(out));
}

VectorField::VectorField(const GridSpec& grid, int n)
    : grid_(grid), n_(n), data_(static_cast<std::size_t>(grid.cell_count()) * n, cplx(0.0)) {
  if (n < 1 || n > kMaxMatrixSize) throw SizeError("vector field size out of range");
}

VectorField::VectorField(const GridSpec& grid, int n, std::vector<cplx> data)
    : grid_(grid), n_(n), data_(std::move(data)) {
  if (data_.size() != static_cast<std::size_t>(grid.cell_count()) * n)
    throw SizeError("vector field: data length does not match grid");
}

Vec VectorField::at(int cell) const {
  Vec v(n_);
  for (int i = 0; i < n_; ++i) v(i) = (*this)(cell, i);
  return v;
}

void VectorField::set(int cell, const Vec& v) {
  for (int i = 0; i < n_; ++i) (*this)(cell, i) = v(i);
}

Vec VectorField::average(std::span<const int> cells) const {
  Vec sum = Vec::Zero(n_);
  for (int c : cells) sum += at(c);
  return sum / static_cast<double>(cells.size());
}

double VectorField::lp_norm(double p) const {
  double total = 0.0;
  for (int c = 0; c < cell_count(); ++c) {
    double sq = 0.0;
    for (int i = 0; i < n_; ++i) sq += std::norm((*this)(c, i));
    total += p == 2.0 ? sq : std::pow(sq, 0.5 * p);
  }
  return std::pow(total * grid_.cell_volume(), 1.0 / p);
}

cplx VectorField::inner(const VectorField& g) const {
  if (g.n_ != n_ || !(g.grid_ == grid_)) throw SizeError("inner product: shape mismatch");
  cplx sum = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) sum += data_[i] * std::conj(g.data_[i]);
  return sum * grid_.cell_volume();
}

VectorField multiply(const MatrixField& m, const VectorField& f) {
  if (m.cols() != f.size() || !(m.grid() == f.grid())) throw SizeError("multiply: shape mismatch");
  VectorField out(f.grid(), m.rows());
  for (int c = 0; c < f.cell_count(); ++c) out.set(c, m[c] * f.at(c));
  return out;
}

MatrixWeight::MatrixWeight(const GridSpec& grid, std::vector<Mat> cells, double condition_cap)
    : grid_(grid), cells_(std::move(cells)) {
  if (static_cast<int>(cells_.size()) != grid.cell_count())
    throw SizeError("matrix weight: cell count does not match grid");
  n_ = static_cast<int>(cells_.front().rows());
  if (n_ < 1 || n_ > kMaxMatrixSize) throw SizeError("matrix weight: size out of range");
  eigs_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    Mat& a = cells_[c];
    const int ci = static_cast<int>(c);
    if (a.rows() != n_ || a.cols() != n_) throw SizeError("matrix weight: inconsistent cell shape");
    if (!a.allFinite()) throw WeightError("ill-conditioned weight: non-finite entry in cell " + std::to_string(c), ci);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw WeightError("ill-conditioned weight: cell " + std::to_string(c) + " is not Hermitian", ci);
    a = 0.5 * (a + a.adjoint());
    eigs_[c] = hermitian_eig(a);
    const double lo = eigs_[c].values.minCoeff();
    const double hi = eigs_[c].values.maxCoeff();
    if (!(lo > 0.0))
      throw WeightError("ill-conditioned weight: non-positive eigenvalue in cell " + std::to_string(c), ci);
    if (hi / lo > condition_cap)
      throw WeightError("ill-conditioned weight: condition number above cap in cell " + std::to_string(c), ci);
  }
}

MatrixWeight MatrixWeight::identity(const GridSpec& grid, int n) {
  return MatrixWeight(grid, std::vector<Mat>(grid.cell_count(), Mat::Identity(n, n)));
}

MatrixWeight MatrixWeight::scalar(const GridSpec& grid, std::span<const double> values) {
  std::vector<Mat> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(Mat::Constant(1, 1, v));
  return MatrixWeight(grid, std::move(cells));
}

double MatrixWeight::condition_number(int c) const {
  return eigs_[c].values.maxCoeff() / eigs_[c].values.minCoeff();
}

MatrixWeight MatrixWeight::power(double s) const {
  MatrixWeight out;
  out.grid_ = grid_;
  out.n_ = n_;
  out.cells_.resize(cells_.size());
  out.eigs_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    HermitianEig e = eigs_[c];
    for (int j = 0; j < n_; ++j) e.values(j) = std::pow(e.values(j), s);
    out.cells_[c] = hermitian_apply(eigs_[c], [s](double x) { return std::pow(x, s); });
    out.eigs_[c] = std::move(e);
  }
  return out;
}

MatrixWeight MatrixWeight::scaled(double factor) const {
  if (!(factor > 0.0)) throw ConfigError("weight scaling factor must be positive");
  MatrixWeight out = *this;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    out.cells_[c] *= factor;
    out.eigs_[c].values *= factor;
  }
  return out;
}

MatrixWeight MatrixWeight::conjugated(const Mat& unitary) const {
  std::vector<Mat> cells(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    Mat a = unitary * cells_[c] * unitary.adjoint();
    cells[c] = 0.5 * (a + a.adjoint());
  }
  return MatrixWeight(grid_, std::move(cells), std::numeric_limits<double>::infinity());
}

Mat MatrixWeight::average(std::span<const int> cells) const {
  Mat sum = Mat::Zero(n_, n_);
  for (int c : cells) sum += cells_[c];
  return sum / static_cast<double>(cells.size());
}

MatrixWeight matrix_power(const MatrixWeight& w, double s) { return w.power(s); }

}  // namespace mwlab
