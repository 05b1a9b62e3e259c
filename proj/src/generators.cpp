#include "mwlab/generators.hpp"

#include "mwlab/io.hpp"

#include <cmath>
#include <numbers>

namespace mwlab {

SmoothFunction::SmoothFunction(int dimension, int modes, double l2_norm, Rng& rng) {
  if (modes < 1) throw ConfigError("smooth function needs at least one mode");
  for (int k2 = dimension == 2 ? -modes : 0; k2 <= (dimension == 2 ? modes : 0); ++k2) {
    for (int k1 = 0; k1 <= modes; ++k1) {
      // one representative of each +-k pair
      if (k1 == 0 && k2 <= 0) continue;
      const double decay = 1.0 / (1.0 + k1 * k1 + k2 * k2);
      terms_.push_back({k1, k2, rng.normal() * decay, rng.normal() * decay});
    }
  }
  double energy = 0.0;
  for (const Term& t : terms_) energy += 0.5 * (t.a * t.a + t.b * t.b);
  const double scale = energy > 0.0 ? l2_norm / std::sqrt(energy) : 0.0;
  for (Term& t : terms_) {
    t.a *= scale;
    t.b *= scale;
  }
}

double SmoothFunction::operator()(double x, double y) const {
  double sum = 0.0;
  for (const Term& t : terms_) {
    const double phase = 2.0 * std::numbers::pi * (t.k1 * x + t.k2 * y);
    sum += t.a * std::cos(phase) + t.b * std::sin(phase);
  }
  return sum;
}

double torus_distance(std::array<double, 2> a, std::array<double, 2> b, int dimension) {
  double sq = 0.0;
  for (int i = 0; i < dimension; ++i) {
    double diff = std::abs(a[i] - b[i]);
    diff = std::min(diff, 1.0 - diff);
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

Mat random_matrix(int rows, int cols, Rng& rng) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cplx(rng.normal(), rng.normal());
  return m;
}

VectorField random_field(const GridSpec& grid, int n, std::uint64_t seed) {
  Rng rng(seed);
  VectorField f(grid, n);
  for (auto& z : f.data()) z = cplx(rng.normal(), rng.normal());
  return f;
}

VectorField smooth_field(const GridSpec& grid, int n, std::uint64_t seed, double singularity) {
  if (singularity < 0.0 || singularity * 2.0 >= 1.0) throw ConfigError("smooth_field: singularity must lie in [0, 1/2)");
  Rng rng(seed);
  VectorField f(grid, n);
  const double floor = 0.5 / grid.cells_per_axis();
  for (int j = 0; j < n; ++j) {
    const SmoothFunction re(grid.dimension, 4, 0.25, rng), im(grid.dimension, 4, 0.25, rng);
    const std::array<double, 2> centre{rng.uniform(), grid.dimension == 2 ? rng.uniform() : 0.0};
    const cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    for (int c = 0; c < grid.cell_count(); ++c) {
      const auto x = grid.cell_center(c);
      const double r = std::max(torus_distance(x, centre, grid.dimension), floor);
      f(c, j) = cplx(re(x[0], x[1]), im(x[0], x[1])) +
                phase * std::pow(r, -singularity * grid.dimension);
    }
  }
  return f;
}

namespace {

/// Clip eigenvalues so the condition number stays within the default cap.
Mat clip_condition(const Mat& a) {
  const HermitianEig eig = hermitian_eig(Mat(0.5 * (a + a.adjoint())));
  const double floor = eig.values.maxCoeff() / MatrixWeight::kDefaultConditionCap;
  return hermitian_apply(eig, [floor](double x) { return std::max(x, floor); });
}

Mat givens_rotation(int n, const std::vector<double>& angles) {
  Mat r = Mat::Identity(n, n);
  int a = 0;
  for (int i = 0; i + 1 < n; ++i) {
    const double c = std::cos(angles[a]);
    const double s = std::sin(angles[a]);
    ++a;
    Mat g = Mat::Identity(n, n);
    g(i, i) = c;
    g(i + 1, i + 1) = c;
    g(i, i + 1) = -s;
    g(i + 1, i) = s;
    r = r * g;
  }
  return r;
}

}  // namespace

MatrixWeight generate_weight(const GridSpec& grid, int n, const WeightSpec& spec, std::uint64_t seed, double p) {
  grid.validate();
  if (n < 1 || n > kMaxMatrixSize) throw ConfigError("weight size n out of range");
  const int cells = grid.cell_count();
  const int d = grid.dimension;
  std::vector<Mat> out(cells, Mat::Identity(n, n));

  if (spec.kind == "identity") {
    return MatrixWeight(grid, std::move(out));
  }
  if (spec.kind == "power") {
    std::vector<double> alpha = spec.alpha.empty() ? std::vector<double>{0.0} : spec.alpha;
    if (alpha.size() == 1) alpha.assign(n, alpha.front());
    if (static_cast<int>(alpha.size()) != n) throw ConfigError("power weight: need one alpha or n alphas");
    for (double a : alpha) {
      if (!(a > -d) || !(a < d * (p - 1.0)))
        throw ConfigError("power weight: alpha outside (-d, d(p-1)) for the requested p");
    }
    for (int c = 0; c < cells; ++c) {
      const double r = torus_distance(grid.cell_center(c), spec.center, d);
      Mat m = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i) m(i, i) = alpha[i] == 0.0 ? 1.0 : std::pow(r, alpha[i]);
      out[c] = clip_condition(m);
    }
    return MatrixWeight(grid, std::move(out));
  }
  if (spec.kind == "rotated") {
    Rng rng(seed);
    std::vector<SmoothFunction> logs, angles;
    for (int i = 0; i < n; ++i) logs.emplace_back(d, spec.modes, spec.amplitude, rng);
    for (int i = 0; i + 1 < n; ++i) angles.emplace_back(d, spec.modes, spec.angle_amplitude, rng);
    std::vector<double> theta(std::max(1, n - 1));
    for (int c = 0; c < cells; ++c) {
      const auto x = grid.cell_center(c);
      Mat diag = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i) diag(i, i) = std::exp(logs[i](x[0], x[1]));
      for (int i = 0; i + 1 < n; ++i) theta[i] = angles[i](x[0], x[1]);
      const Mat r = givens_rotation(n, theta);
      out[c] = clip_condition(r * diag * r.adjoint());
    }
    return MatrixWeight(grid, std::move(out));
  }
  if (spec.kind == "lognormal") {
    if (spec.sigma < 0.0) throw ConfigError("lognormal weight: sigma must be nonnegative");
    if (spec.sigma == 0.0) return MatrixWeight(grid, std::move(out));
    Rng rng(seed);
    for (int c = 0; c < cells; ++c) {
      Mat g(n, n);
      for (int i = 0; i < n; ++i) {
        g(i, i) = rng.normal();
        for (int j = i + 1; j < n; ++j) {
          g(i, j) = rng.normal() / std::sqrt(2.0);
          g(j, i) = g(i, j);
        }
      }
      const double s = spec.sigma;
      out[c] = clip_condition(hermitian_apply(hermitian_eig(g), [s](double x) { return std::exp(s * x); }));
    }
    return MatrixWeight(grid, std::move(out));
  }
  if (spec.kind == "table") {
    MatrixWeight w = read_weight_table(spec.path);
    if (!(w.grid() == grid) || w.size() != n) throw ConfigError("weight table does not match grid or n: " + spec.path);
    return w;
  }
  throw ConfigError("unknown weight kind: " + spec.kind);
}

MatrixField generate_symbol(const GridSpec& grid, int m, const SymbolSpec& spec, std::uint64_t seed) {
  grid.validate();
  if (m < 1 || m > kMaxMatrixSize) throw ConfigError("symbol size m out of range");
  const int cells = grid.cell_count();
  const int d = grid.dimension;
  if (spec.kind == "table") {
    MatrixField b = read_matrix_table(spec.path);
    if (!(b.grid() == grid) || b.rows() != m) throw ConfigError("symbol table does not match grid or m: " + spec.path);
    return b;
  }
  MatrixField out(grid, m, m);
  const int parts = spec.complex ? 2 : 1;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int part = 0; part < parts; ++part) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>((i * m + j) * 2 + part)));
        std::vector<double> values(cells, 0.0);
        if (spec.kind == "constant") {
          const double v = spec.amplitude * rng.normal();
          values.assign(cells, v);
        } else if (spec.kind == "smooth") {
          const SmoothFunction f(d, spec.modes, spec.amplitude, rng);
          for (int c = 0; c < cells; ++c) {
            const auto x = grid.cell_center(c);
            values[c] = f(x[0], x[1]);
          }
        } else if (spec.kind == "step") {
          constexpr int kBlocks = 8;
          std::vector<double> block(d == 2 ? kBlocks * kBlocks : kBlocks);
          for (double& v : block) v = spec.amplitude * rng.normal();
          for (int c = 0; c < cells; ++c) {
            const auto x = grid.cell_center(c);
            const int bx = static_cast<int>(x[0] * kBlocks);
            const int by = d == 2 ? static_cast<int>(x[1] * kBlocks) : 0;
            values[c] = block[bx + kBlocks * by];
          }
        } else if (spec.kind == "log") {
          std::array<double, 2> center = spec.center;
          const double scale = spec.amplitude * rng.normal();
          for (int c = 0; c < cells; ++c)
            values[c] = scale * std::log(torus_distance(grid.cell_center(c), center, d));
        } else if (spec.kind == "indicator") {
          const double v = (i == j && part == 0) ? spec.amplitude : 0.0;
          for (int c = 0; c < cells; ++c) {
            const double x = grid.cell_center(c)[0];
            values[c] = (x >= spec.low && x < spec.high) ? v : 0.0;
          }
        } else if (spec.kind == "iid") {
          for (double& v : values) v = spec.amplitude * rng.normal();
        } else {
          throw ConfigError("unknown symbol kind: " + spec.kind);
        }
        for (int c = 0; c < cells; ++c) out[c](i, j) += part == 0 ? cplx(values[c], 0.0) : cplx(0.0, values[c]);
      }
    }
  }
  return out;
}

}  // namespace mwlab
