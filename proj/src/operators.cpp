#include "mwlab/operators.hpp"

#include "mwlab/nested.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace mwlab {

std::string Czo::name() const {
  return kind == Kind::hilbert ? "hilbert" : "riesz" + std::to_string(axis + 1);
}

cplx czo_multiplier(const Czo& t, int k1, int k2, int dimension) {
  const cplx minus_i(0.0, -1.0);
  if (t.kind == Czo::Kind::hilbert) {
    if (dimension != 1) throw ConfigError("the Hilbert transform needs d = 1");
    if (k1 == 0) return 0.0;
    return minus_i * (k1 > 0 ? 1.0 : -1.0);
  }
  if (t.axis < 0 || t.axis >= dimension) throw ConfigError("Riesz axis out of range");
  if (k1 == 0 && k2 == 0) return 0.0;
  const double radius = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
  return minus_i * (static_cast<double>(t.axis == 0 ? k1 : k2) / radius);
}

namespace {

int signed_frequency(int k, int n) { return k < n / 2 ? k : k - n; }

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

/// Applies the multiplier of t to one scalar component in place.
void apply_multiplier(const Czo& t, const GridSpec& grid, std::vector<cplx>& values) {
  auto& fft = fft_engine();
  const int n = grid.cells_per_axis();
  std::vector<cplx> line(n), spec(n);
  if (grid.dimension == 1) {
    fft.fwd(spec, values);
    for (int k = 0; k < n; ++k) spec[k] *= czo_multiplier(t, signed_frequency(k, n), 0, 1);
    fft.inv(values, spec);
    return;
  }
  // rows (axis 0), then columns (axis 1)
  for (int y = 0; y < n; ++y) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(y) * n, n, line.begin());
    fft.fwd(spec, line);
    std::copy_n(spec.begin(), n, values.begin() + static_cast<std::ptrdiff_t>(y) * n);
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) line[y] = values[x + n * y];
    fft.fwd(spec, line);
    for (int y = 0; y < n; ++y)
      spec[y] *= czo_multiplier(t, signed_frequency(x, n), signed_frequency(y, n), 2);
    fft.inv(line, spec);
    for (int y = 0; y < n; ++y) values[x + n * y] = line[y];
  }
  for (int y = 0; y < n; ++y) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(y) * n, n, spec.begin());
    fft.inv(line, spec);
    std::copy_n(line.begin(), n, values.begin() + static_cast<std::ptrdiff_t>(y) * n);
  }
}

}  // namespace

VectorField restrict_to(const CellSet& e, const VectorField& f) {
  VectorField out(f.grid(), f.size());
  for (int c : e) out.set(c, f.at(c));
  return out;
}

VectorField apply_czo(const Czo& t, const VectorField& f, const std::optional<CellSet>& restriction) {
  const GridSpec& grid = f.grid();
  if (t.kind == Czo::Kind::hilbert && grid.dimension != 1) throw ConfigError("the Hilbert transform needs d = 1");
  if (t.kind == Czo::Kind::riesz && (t.axis < 0 || t.axis >= grid.dimension))
    throw ConfigError("Riesz axis out of range");
  const VectorField input = restriction ? restrict_to(*restriction, f) : f;
  VectorField out(grid, f.size());
  std::vector<cplx> component(grid.cell_count());
  for (int i = 0; i < f.size(); ++i) {
    for (int c = 0; c < grid.cell_count(); ++c) component[c] = input(c, i);
    apply_multiplier(t, grid, component);
    for (int c = 0; c < grid.cell_count(); ++c) out(c, i) = component[c];
  }
  return restriction ? restrict_to(*restriction, out) : out;
}

VectorField commutator(const MatrixField& b, const Czo& t, const VectorField& f) {
  if (b.rows() != b.cols() || b.cols() != f.size()) throw SizeError("commutator: symbol and field sizes differ");
  VectorField lhs = multiply(b, apply_czo(t, f));
  const VectorField rhs = apply_czo(t, multiply(b, f));
  lhs.flat() -= rhs.flat();
  return lhs;
}

VectorField averaging(const CellSet& e, const VectorField& f) {
  if (e.empty()) throw ConfigError("averaging: empty set");
  const Vec mean = f.average(e);
  VectorField out(f.grid(), f.size());
  for (int c : e) out.set(c, mean);
  return out;
}

LinearOperator LinearOperator::identity(const GridSpec& grid, int n) {
  auto id = [](const VectorField& f) { return f; };
  return {grid, n, n, id, id};
}

LinearOperator LinearOperator::zero(const GridSpec& grid, int n) {
  auto z = [](const VectorField& f) { return VectorField(f.grid(), f.size()); };
  return {grid, n, n, z, z};
}

LinearOperator LinearOperator::multiplication(const MatrixField& m) {
  const MatrixField adj = m.adjoint();
  return {m.grid(), m.cols(), m.rows(), [m](const VectorField& f) { return multiply(m, f); },
          [adj](const VectorField& f) { return multiply(adj, f); }};
}

LinearOperator LinearOperator::czo(const GridSpec& grid, int n, const Czo& t) {
  return {grid, n, n, [t](const VectorField& f) { return apply_czo(t, f); },
          [t](const VectorField& f) {
            VectorField out = apply_czo(t, f);
            out.flat() *= -1.0;
            return out;
          }};
}

LinearOperator LinearOperator::commutator(const MatrixField& b, const Czo& t) {
  const MatrixField adj = b.adjoint();
  // [M_B, T]^* = [M_{B^*}, T] since T^* = -T
  return {b.grid(), b.cols(), b.rows(), [b, t](const VectorField& f) { return mwlab::commutator(b, t, f); },
          [adj, t](const VectorField& f) { return mwlab::commutator(adj, t, f); }};
}

LinearOperator LinearOperator::averaging(const GridSpec& grid, int n, const CellSet& e) {
  auto avg = [e](const VectorField& f) { return mwlab::averaging(e, f); };
  return {grid, n, n, avg, avg};
}

LinearOperator LinearOperator::restricted(const CellSet& e) const {
  auto fwd = apply;
  auto adj = adjoint;
  return {grid, in_size, out_size,
          [fwd, e](const VectorField& f) { return restrict_to(e, fwd(restrict_to(e, f))); },
          [adj, e](const VectorField& f) { return restrict_to(e, adj(restrict_to(e, f))); }};
}

LinearOperator LinearOperator::after(const LinearOperator& first) const {
  if (first.out_size != in_size) throw SizeError("operator composition: size mismatch");
  auto a = apply, aa = adjoint, b = first.apply, ba = first.adjoint;
  return {grid, first.in_size, out_size, [a, b](const VectorField& f) { return a(b(f)); },
          [aa, ba](const VectorField& f) { return ba(aa(f)); }};
}

LinearOperator LinearOperator::adjoint_operator() const { return {grid, out_size, in_size, adjoint, apply}; }

std::vector<int> haar_signs(const DyadicLattice& lattice, int cube, int eps) {
  const GridSpec& grid = lattice.grid();
  const DyadicCube& q = lattice.cube(cube);
  if (q.level >= grid.depth) throw ConfigError("Haar functions live on cubes of level below the grid depth");
  if (eps < 1 || eps >= (1 << grid.dimension)) throw ConfigError("Haar signature out of range");
  std::vector<int> out(grid.cell_count(), 0);
  const int half = q.side / 2;
  for (int c : q.cells) {
    int s = 1;
    for (int axis = 0; axis < grid.dimension; ++axis)
      if ((eps >> axis) & 1) s *= lattice.relative_coord(q, c, axis) < half ? 1 : -1;
    out[c] = s;
  }
  return out;
}

std::vector<double> haar_function(const DyadicLattice& lattice, int cube, int eps) {
  const auto signs = haar_signs(lattice, cube, eps);
  const double measure = lattice.cube(cube).cell_count() * lattice.grid().cell_volume();
  const double scale = 1.0 / std::sqrt(measure);
  std::vector<double> out(signs.size());
  for (std::size_t c = 0; c < signs.size(); ++c) out[c] = scale * signs[c];
  return out;
}

HaarCoefficients zero_haar(std::shared_ptr<const DyadicLattice> lattice, int n) {
  HaarCoefficients out;
  out.n = n;
  out.mean = Eigen::VectorXcd::Zero(n);
  out.coefficients.resize(lattice->size());
  const int sig = (1 << lattice->grid().dimension) - 1;
  for (int q = 0; q < lattice->size(); ++q)
    if (lattice->cube(q).level < lattice->grid().depth) out.coefficients[q].assign(sig, Eigen::VectorXcd::Zero(n));
  out.lattice = std::move(lattice);
  return out;
}

namespace {

/// Sign of h_Q^eps at one cell of Q without materialising the whole function.
int haar_sign_at(const DyadicLattice& lattice, const DyadicCube& q, int cell, int eps) {
  int s = 1;
  const int half = q.side / 2;
  for (int axis = 0; axis < lattice.grid().dimension; ++axis)
    if ((eps >> axis) & 1) s *= lattice.relative_coord(q, cell, axis) < half ? 1 : -1;
  return s;
}

/// Transform of a field given as a cells x n row-major table.
HaarCoefficients haar_of_table(const Eigen::MatrixXcd& values, std::shared_ptr<const DyadicLattice> lattice) {
  const int n = static_cast<int>(values.cols());
  HaarCoefficients out = zero_haar(lattice, n);
  const GridSpec& grid = lattice->grid();
  out.mean = values.colwise().mean().transpose();
  const double vol = grid.cell_volume();
  for (int q = 0; q < lattice->size(); ++q) {
    const DyadicCube& cube = lattice->cube(q);
    if (cube.level >= grid.depth) continue;
    const double scale = vol / std::sqrt(cube.cell_count() * vol);
    for (int eps = 1; eps <= out.signatures(); ++eps) {
      Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(n);
      for (int c : cube.cells) sum += static_cast<double>(haar_sign_at(*lattice, cube, c, eps)) * values.row(c).transpose();
      out.coefficients[q][eps - 1] = scale * sum;
    }
  }
  return out;
}

Eigen::MatrixXcd inverse_table(const HaarCoefficients& h) {
  const DyadicLattice& lattice = *h.lattice;
  const GridSpec& grid = lattice.grid();
  Eigen::MatrixXcd out = h.mean.transpose().replicate(grid.cell_count(), 1);
  const double vol = grid.cell_volume();
  for (int q = 0; q < lattice.size(); ++q) {
    const DyadicCube& cube = lattice.cube(q);
    if (cube.level >= grid.depth) continue;
    const double scale = 1.0 / std::sqrt(cube.cell_count() * vol);
    for (int eps = 1; eps <= h.signatures(); ++eps) {
      const Eigen::VectorXcd& coef = h.coefficients[q][eps - 1];
      if (coef.isZero(0.0)) continue;
      for (int c : cube.cells) out.row(c) += (scale * haar_sign_at(lattice, cube, c, eps)) * coef.transpose();
    }
  }
  return out;
}

}  // namespace

HaarCoefficients haar_transform(const VectorField& f, std::shared_ptr<const DyadicLattice> lattice) {
  if (!(lattice->grid() == f.grid())) throw SizeError("haar_transform: lattice grid differs from field grid");
  Eigen::MatrixXcd values(f.cell_count(), f.size());
  for (int c = 0; c < f.cell_count(); ++c)
    for (int i = 0; i < f.size(); ++i) values(c, i) = f(c, i);
  return haar_of_table(values, std::move(lattice));
}

HaarCoefficients haar_transform(const MatrixField& b, std::shared_ptr<const DyadicLattice> lattice) {
  if (!(lattice->grid() == b.grid())) throw SizeError("haar_transform: lattice grid differs from field grid");
  Eigen::MatrixXcd values(b.cell_count(), b.rows() * b.cols());
  for (int c = 0; c < b.cell_count(); ++c)
    for (int j = 0; j < b.cols(); ++j)
      for (int i = 0; i < b.rows(); ++i) values(c, i + j * b.rows()) = b[c](i, j);
  return haar_of_table(values, std::move(lattice));
}

VectorField inverse_haar(const HaarCoefficients& h) {
  const Eigen::MatrixXcd values = inverse_table(h);
  VectorField out(h.lattice->grid(), h.n);
  for (int c = 0; c < out.cell_count(); ++c)
    for (int i = 0; i < h.n; ++i) out(c, i) = values(c, i);
  return out;
}

MatrixField inverse_haar_matrix(const HaarCoefficients& h, int rows, int cols) {
  if (rows * cols != h.n) throw SizeError("inverse_haar_matrix: shape does not match coefficient size");
  const Eigen::MatrixXcd values = inverse_table(h);
  MatrixField out(h.lattice->grid(), rows, cols);
  for (int c = 0; c < out.cell_count(); ++c)
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) out[c](i, j) = values(c, i + j * rows);
  return out;
}

VectorField paraproduct(const HaarCoefficients& a, const VectorField& g) {
  if (a.n != 1) throw SizeError("paraproduct: coefficients must be scalar");
  const DyadicLattice& lattice = *a.lattice;
  const GridSpec& grid = lattice.grid();
  if (!(grid == g.grid())) throw SizeError("paraproduct: grid mismatch");
  VectorField out(grid, g.size());
  const double vol = grid.cell_volume();
  for (int q = 0; q < lattice.size(); ++q) {
    const DyadicCube& cube = lattice.cube(q);
    if (cube.level >= grid.depth) continue;
    const Vec mean = g.average(cube.cells);
    const double scale = 1.0 / std::sqrt(cube.cell_count() * vol);
    for (int eps = 1; eps <= a.signatures(); ++eps) {
      const cplx coef = a.coefficients[q][eps - 1](0);
      if (coef == 0.0) continue;
      for (int c : cube.cells)
        out.set(c, out.at(c) + (coef * scale * static_cast<double>(haar_sign_at(lattice, cube, c, eps))) * mean);
    }
  }
  return out;
}

std::vector<double> dyadic_maximal(const DyadicLattice& lattice, std::span<const double> g) {
  const GridSpec& grid = lattice.grid();
  std::vector<double> sums(lattice.size(), 0.0);
  for (int k = grid.depth; k >= 0; --k) {
    for (int q : lattice.level(k)) {
      const DyadicCube& cube = lattice.cube(q);
      double s = 0.0;
      if (k == grid.depth) {
        for (int c : cube.cells) s += g[c];
      } else {
        for (int child : cube.children) s += sums[child];
      }
      sums[q] = s;
    }
  }
  std::vector<double> out(grid.cell_count(), 0.0);
  for (int c = 0; c < grid.cell_count(); ++c) {
    for (int k = 0; k <= grid.depth; ++k) {
      const int q = lattice.owner(k, c);
      out[c] = std::max(out[c], sums[q] / static_cast<double>(lattice.cube(q).cell_count()));
    }
  }
  return out;
}

namespace {

/// m_Q |U_Q U^{-1/p} f| for every cube of the table's lattice.
std::vector<double> reduced_means(const MatrixWeight& u, double p, const VectorField& f, const ReducingTable& table) {
  if (f.size() != u.size() || !(f.grid() == u.grid())) throw SizeError("reduced means: shape mismatch");
  const MatrixWeight neg = u.power(-1.0 / p);
  std::vector<Vec> g(f.cell_count());
  for (int c = 0; c < f.cell_count(); ++c) g[c] = neg[c] * f.at(c);
  const DyadicLattice& lattice = table.lattice();
  std::vector<double> out(lattice.size());
  parallel_for(lattice.size(), [&](int q) {
    const DyadicCube& cube = lattice.cube(q);
    const Mat& red = table[q].primary;
    double s = 0.0;
    for (int c : cube.cells) s += (red * g[c]).norm();
    out[q] = s / static_cast<double>(cube.cell_count());
  });
  return out;
}

}  // namespace

std::vector<double> goldberg_maximal(const MatrixWeight& u, double p, const VectorField& f,
                                     const ReducingTable& table) {
  const auto means = reduced_means(u, p, f, table);
  const DyadicLattice& lattice = table.lattice();
  const GridSpec& grid = lattice.grid();
  std::vector<double> out(grid.cell_count(), 0.0);
  for (int c = 0; c < grid.cell_count(); ++c)
    for (int k = 0; k <= grid.depth; ++k) out[c] = std::max(out[c], means[lattice.owner(k, c)]);
  return out;
}

double carleson_norm_sq(const CarlesonSequence& a) {
  const DyadicLattice& lattice = *a.lattice;
  const GridSpec& grid = lattice.grid();
  if (static_cast<int>(a.a.size()) != lattice.size()) throw SizeError("Carleson sequence: wrong length");
  std::vector<double> sums(lattice.size(), 0.0);
  double best = 0.0;
  for (int k = grid.depth; k >= 0; --k) {
    for (int q : lattice.level(k)) {
      if (a.a[q] < 0.0) throw ConfigError("Carleson sequence entries must be nonnegative");
      double s = a.a[q] * a.a[q];
      for (int child : lattice.cube(q).children) s += sums[child];
      sums[q] = s;
      best = std::max(best, s / (lattice.cube(q).cell_count() * grid.cell_volume()));
    }
  }
  return best;
}

double carleson_embedding(const CarlesonSequence& a, const MatrixWeight& u, double p, const VectorField& f,
                          const ReducingTable& table) {
  const auto means = reduced_means(u, p, f, table);
  const DyadicLattice& lattice = table.lattice();
  const GridSpec& grid = lattice.grid();
  double total = 0.0;
  for (int c = 0; c < grid.cell_count(); ++c) {
    double square = 0.0;
    for (int k = 0; k <= grid.depth; ++k) {
      const int q = lattice.owner(k, c);
      const double t = a.a[q] * means[q];
      square += t * t / (lattice.cube(q).cell_count() * grid.cell_volume());
    }
    total += detail::pow_positive(square, 0.5 * p);
  }
  return std::pow(total * grid.cell_volume(), 1.0 / p);
}

HaarCoefficients carleson_symbol(const CarlesonSequence& a) {
  HaarCoefficients out = zero_haar(a.lattice, 1);
  for (int q = 0; q < a.lattice->size(); ++q)
    for (auto& coef : out.coefficients[q]) coef(0) = a.a[q];
  return out;
}

VectorField sparse_apply(const SparseFamily& s, const MatrixField& b, const VectorField& f,
                         const SparseKernel& kernel) {
  if (b.rows() != b.cols() || b.cols() != f.size()) throw SizeError("sparse_apply: shape mismatch");
  VectorField out(f.grid(), f.size());
  for (std::size_t mi = 0; mi < s.members.size(); ++mi) {
    const CellSet& q = s.members[mi].cells;
    const double count = static_cast<double>(q.size());
    if (!kernel) {
      Vec mean_f = Vec::Zero(f.size());
      Vec mean_bf = Vec::Zero(f.size());
      for (int y : q) {
        const Vec fy = f.at(y);
        mean_f += fy;
        mean_bf += b[y] * fy;
      }
      mean_f /= count;
      mean_bf /= count;
      for (int x : q) out.set(x, out.at(x) + b[x] * mean_f - mean_bf);
      continue;
    }
    for (int x : q) {
      Vec acc = Vec::Zero(f.size());
      for (int y : q) {
        const cplx k = kernel(static_cast<int>(mi), x, y);
        if (std::abs(k) > 1.0 + 1e-12) throw ConfigError("sparse kernel exceeds 1 in modulus");
        acc += k * ((b[x] - b[y]) * f.at(y));
      }
      out.set(x, out.at(x) + acc / count);
    }
  }
  return out;
}

MatrixField project_PR(const MatrixField& b, int level) {
  const GridSpec& grid = b.grid();
  if (level < 0 || level > grid.depth) throw ConfigError("project_PR: level out of range");
  const DyadicLattice lattice(grid, {0, 0});
  MatrixField out(grid, b.rows(), b.cols());
  for (int q : lattice.level(level)) {
    const auto& cells = lattice.cube(q).cells;
    const Mat mean = b.average(cells);
    for (int c : cells) out[c] = mean;
  }
  return out;
}

}  // namespace mwlab
