#include "mwlab/weights.hpp"

#include "mwlab/nested.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mwlab {

double ap_local(const MatrixWeight& pos, const MatrixWeight& neg, double p, std::span<const int> cells,
                bool dual) {
  const double pp = conjugate_exponent(p);
  auto norm_sq = [&](int x, int y) { return spectral_norm_sq(pos[x] * neg[y]); };
  if (dual) return detail::mixed_mean(cells, norm_sq, p, pp, true);
  return detail::mixed_mean(cells, norm_sq, pp, p, false);
}

namespace {

CubeSup reduce_sup(std::vector<double> local) {
  CubeSup out;
  out.value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (local[i] > out.value) {
      out.value = local[i];
      out.argmax = i;
    }
  }
  if (local.empty()) out.value = 0.0;
  out.local = std::move(local);
  return out;
}

void check_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("exponent p must lie in (1, inf)");
}

}  // namespace

CubeSup ap_characteristic(const MatrixWeight& w, double p, const CubeFamily& cubes, bool dual) {
  check_exponent(p);
  if (cubes.size() == 0) throw ConfigError("ap_characteristic: empty cube family");
  const MatrixWeight pos = w.power(1.0 / p);
  const MatrixWeight neg = w.power(-1.0 / p);
  std::vector<double> local(cubes.size());
  parallel_for(static_cast<int>(cubes.size()),
               [&](int i) { local[i] = ap_local(pos, neg, p, cubes[i].cells, dual); });
  return reduce_sup(std::move(local));
}

double ainfty_of(std::span<const double> w, const GridSpec& grid, const CubeFamily& cubes) {
  std::vector<DyadicLattice> lattices;
  for (const Shift& t : all_shifts(grid.dimension)) lattices.emplace_back(grid, t);
  const int cells = grid.cell_count();
  std::vector<double> local(cubes.size(), 0.0);
  parallel_for(static_cast<int>(cubes.size()), [&](int qi) {
    const DyadicCube& q = cubes[qi];
    std::vector<double> g(cells, 0.0);
    double mass = 0.0;
    for (int c : q.cells) {
      g[c] = w[c];
      mass += w[c];
    }
    if (!(mass > 0.0)) throw ConfigError("ainfty: weight vanishes on a cube");
    std::vector<double> maximal(cells, 0.0);
    for (const DyadicLattice& lat : lattices) {
      std::vector<double> sums(lat.size(), 0.0);
      for (int k = grid.depth; k >= 0; --k) {
        for (int r : lat.level(k)) {
          const DyadicCube& cube = lat.cube(r);
          double s = 0.0;
          if (k == grid.depth) {
            for (int c : cube.cells) s += g[c];
          } else {
            for (int child : cube.children) s += sums[child];
          }
          sums[r] = s;
        }
      }
      for (int c : q.cells) {
        for (int k = 0; k <= grid.depth; ++k) {
          const int r = lat.owner(k, c);
          maximal[c] = std::max(maximal[c], sums[r] / static_cast<double>(lat.cube(r).cell_count()));
        }
      }
    }
    double integral = 0.0;
    for (int c : q.cells) integral += maximal[c];
    local[qi] = integral / mass;
  });
  return *std::max_element(local.begin(), local.end());
}

double ainfty_scalar(const MatrixWeight& w, double p, const CubeFamily& cubes, int directions) {
  check_exponent(p);
  const int n = w.size();
  if (directions <= 0) directions = 2 * n * n;
  if (directions < 2 * n * n) throw ConfigError("ainfty_scalar: need at least 2 n^2 directions");
  const MatrixWeight pos = w.power(1.0 / p);
  const auto dirs = n == 1 ? std::vector<Vec>{Vec::Ones(1)} : sphere_directions(n, directions);
  double best = 0.0;
  std::vector<double> we(w.cell_count());
  for (const Vec& e : dirs) {
    for (int c = 0; c < w.cell_count(); ++c) we[c] = std::pow((pos[c] * e).norm(), p);
    best = std::max(best, ainfty_of(we, w.grid(), cubes));
  }
  return best;
}

namespace {

int default_directions(int n, const ReducingOptions& options) {
  return options.directions > 0 ? options.directions : 64 * n * n;
}

/// Least-squares quadratic-form fit rho(e)^2 ~ e^* M e over fixed directions.
class EllipsoidFit {
 public:
  EllipsoidFit(int n, int count) : n_(n), dirs_(sphere_directions(n, count)) {
    const int unknowns = n * n;
    Eigen::MatrixXd design(count, unknowns);
    for (int r = 0; r < count; ++r) {
      const Vec& e = dirs_[r];
      int col = 0;
      for (int i = 0; i < n; ++i) design(r, col++) = std::norm(e(i));
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const cplx z = std::conj(e(i)) * e(j);
          design(r, col++) = 2.0 * z.real();
          design(r, col++) = -2.0 * z.imag();
        }
      }
    }
    pinv_ = design.completeOrthogonalDecomposition().pseudoInverse();
  }

  const std::vector<Vec>& directions() const { return dirs_; }

  /// Square root of the fitted form; eigenvalues clipped to stay positive.
  Mat fit_root(const Eigen::VectorXd& rho_sq) const {
    const Eigen::VectorXd theta = pinv_ * rho_sq;
    Mat m = Mat::Zero(n_, n_);
    int col = 0;
    for (int i = 0; i < n_; ++i) m(i, i) = theta(col++);
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        m(i, j) = cplx(theta(col), theta(col + 1));
        m(j, i) = std::conj(m(i, j));
        col += 2;
      }
    }
    const HermitianEig eig = hermitian_eig(m);
    const double top = eig.values.maxCoeff();
    const double floor = top > 0.0 ? top * 1e-12 : rho_sq.minCoeff();
    return hermitian_apply(eig, [floor](double x) { return std::sqrt(std::max(x, floor)); });
  }

 private:
  int n_;
  std::vector<Vec> dirs_;
  Eigen::MatrixXd pinv_;
};

struct Extremes {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
};

Extremes ratio_extremes(const Mat& root, const std::vector<Vec>& dirs, const Eigen::VectorXd& rho) {
  Extremes out;
  for (std::size_t r = 0; r < dirs.size(); ++r) {
    const double ratio = (root * dirs[r]).norm() / rho(static_cast<Eigen::Index>(r));
    out.lo = std::min(out.lo, ratio);
    out.hi = std::max(out.hi, ratio);
  }
  return out;
}

void finish_pair(ReducingPair& pair, int n, const ReducingOptions& options) {
  pair.primary_inverse = pair.primary.inverse();
  pair.dual_inverse = pair.dual.inverse();
  const double lo = std::sqrt(1.0 / n) * (1.0 - options.fit_tolerance);
  const double hi = std::sqrt(static_cast<double>(n)) * (1.0 + options.fit_tolerance);
  pair.certified = pair.min_ratio >= lo && pair.max_ratio <= hi && pair.dual_min_ratio >= lo &&
                   pair.dual_max_ratio <= hi;
}

/// Shared builder: `sum_w`/`sum_winv` are cell sums of W and W^{-1} (p = 2),
/// `sum_p`/`sum_pp` cell sums of |W^{1/p} e|^p and |W^{-1/p} e|^{p'} per
/// direction (p != 2, n > 1).
struct CubeSums {
  Mat sum_w;
  Mat sum_winv;
  Eigen::VectorXd sum_p;
  Eigen::VectorXd sum_pp;
};

ReducingPair pair_from_sums(const CubeSums& s, double count, int n, double p, const EllipsoidFit* fit,
                            const ReducingOptions& options) {
  ReducingPair pair;
  pair.p = p;
  const double pp = conjugate_exponent(p);
  if (p == 2.0 || n == 1) {
    if (n == 1) {
      // sum_w holds sum of w, sum_winv sum of w^{-p'/p}
      pair.primary = Mat::Constant(1, 1, std::pow(s.sum_w(0, 0).real() / count, 1.0 / p));
      pair.dual = Mat::Constant(1, 1, std::pow(s.sum_winv(0, 0).real() / count, 1.0 / pp));
      pair.directions = 1;
    } else {
      const Mat aw = s.sum_w / count;
      const Mat awinv = s.sum_winv / count;
      pair.primary = hermitian_power(Mat(0.5 * (aw + aw.adjoint())), 0.5);
      pair.dual = hermitian_power(Mat(0.5 * (awinv + awinv.adjoint())), 0.5);
      if (options.certify && fit != nullptr) {
        const auto& dirs = fit->directions();
        Eigen::VectorXd rho(dirs.size());
        Eigen::VectorXd rho_dual(dirs.size());
        for (std::size_t r = 0; r < dirs.size(); ++r) {
          rho(r) = std::sqrt(std::max(0.0, (dirs[r].adjoint() * aw * dirs[r])(0, 0).real()));
          rho_dual(r) = std::sqrt(std::max(0.0, (dirs[r].adjoint() * awinv * dirs[r])(0, 0).real()));
        }
        const Extremes a = ratio_extremes(pair.primary, dirs, rho);
        const Extremes b = ratio_extremes(pair.dual, dirs, rho_dual);
        pair.min_ratio = a.lo;
        pair.max_ratio = a.hi;
        pair.dual_min_ratio = b.lo;
        pair.dual_max_ratio = b.hi;
        pair.directions = static_cast<int>(dirs.size());
      }
    }
    finish_pair(pair, n, options);
    return pair;
  }
  const Eigen::VectorXd rho = (s.sum_p / count).array().pow(1.0 / p).matrix();
  const Eigen::VectorXd rho_dual = (s.sum_pp / count).array().pow(1.0 / pp).matrix();
  pair.primary = fit->fit_root(rho.array().square().matrix());
  pair.dual = fit->fit_root(rho_dual.array().square().matrix());
  const Extremes a = ratio_extremes(pair.primary, fit->directions(), rho);
  const Extremes b = ratio_extremes(pair.dual, fit->directions(), rho_dual);
  pair.min_ratio = a.lo;
  pair.max_ratio = a.hi;
  pair.dual_min_ratio = b.lo;
  pair.dual_max_ratio = b.hi;
  pair.directions = static_cast<int>(fit->directions().size());
  finish_pair(pair, n, options);
  return pair;
}

/// Per-cell contributions to CubeSums.
class CellTerms {
 public:
  CellTerms(const MatrixWeight& w, double p, const EllipsoidFit* fit) : n_(w.size()), p_(p) {
    const double pp = conjugate_exponent(p);
    const int cells = w.cell_count();
    if (n_ == 1) {
      w_.resize(cells);
      winv_.resize(cells);
      for (int c = 0; c < cells; ++c) {
        const double v = w[c](0, 0).real();
        w_[c] = Mat::Constant(1, 1, v);
        winv_[c] = Mat::Constant(1, 1, std::pow(v, -pp / p));
      }
    } else if (p == 2.0) {
      w_.resize(cells);
      winv_.resize(cells);
      const MatrixWeight inv = w.power(-1.0);
      for (int c = 0; c < cells; ++c) {
        w_[c] = w[c];
        winv_[c] = inv[c];
      }
    } else {
      const MatrixWeight pos = w.power(1.0 / p);
      const MatrixWeight neg = w.power(-1.0 / p);
      const auto& dirs = fit->directions();
      const auto count = static_cast<Eigen::Index>(dirs.size());
      sp_.assign(cells, Eigen::VectorXd(count));
      spp_.assign(cells, Eigen::VectorXd(count));
      for (int c = 0; c < cells; ++c) {
        for (Eigen::Index r = 0; r < count; ++r) {
          sp_[c](r) = detail::pow_from_sq((pos[c] * dirs[r]).squaredNorm(), p);
          spp_[c](r) = detail::pow_from_sq((neg[c] * dirs[r]).squaredNorm(), pp);
        }
      }
    }
  }

  CubeSums zero() const {
    CubeSums s;
    if (uses_matrices()) {
      s.sum_w = Mat::Zero(n_, n_);
      s.sum_winv = Mat::Zero(n_, n_);
    } else {
      s.sum_p = Eigen::VectorXd::Zero(sp_.front().size());
      s.sum_pp = Eigen::VectorXd::Zero(sp_.front().size());
    }
    return s;
  }

  void add_cell(CubeSums& s, int c) const {
    if (uses_matrices()) {
      s.sum_w += w_[c];
      s.sum_winv += winv_[c];
    } else {
      s.sum_p += sp_[c];
      s.sum_pp += spp_[c];
    }
  }

  void add(CubeSums& s, const CubeSums& other) const {
    if (uses_matrices()) {
      s.sum_w += other.sum_w;
      s.sum_winv += other.sum_winv;
    } else {
      s.sum_p += other.sum_p;
      s.sum_pp += other.sum_pp;
    }
  }

 private:
  bool uses_matrices() const { return n_ == 1 || p_ == 2.0; }

  int n_;
  double p_;
  std::vector<Mat> w_, winv_;
  std::vector<Eigen::VectorXd> sp_, spp_;
};

std::unique_ptr<EllipsoidFit> make_fit(int n, double p, const ReducingOptions& options) {
  if (n == 1) return nullptr;
  if (p == 2.0 && !options.certify) return nullptr;
  return std::make_unique<EllipsoidFit>(n, default_directions(n, options));
}

}  // namespace

ReducingPair reducing_matrices(const MatrixWeight& w, double p, std::span<const int> cells,
                               const ReducingOptions& options) {
  check_exponent(p);
  if (cells.empty()) throw ConfigError("reducing_matrices: empty cube");
  const auto fit = make_fit(w.size(), p, options);
  const CellTerms terms(w, p, fit.get());
  CubeSums s = terms.zero();
  for (int c : cells) terms.add_cell(s, c);
  return pair_from_sums(s, static_cast<double>(cells.size()), w.size(), p, fit.get(), options);
}

ReducingPair reducing_matrices(const MatrixWeight& w, double p, const DyadicCube& q,
                               const ReducingOptions& options) {
  return reducing_matrices(w, p, std::span<const int>(q.cells), options);
}

ReducingTable::ReducingTable(const MatrixWeight& w, double p, std::shared_ptr<const DyadicLattice> lattice,
                             const ReducingOptions& options)
    : lattice_(std::move(lattice)), p_(p) {
  check_exponent(p);
  if (!(lattice_->grid() == w.grid())) throw SizeError("reducing table: lattice grid differs from weight grid");
  const auto fit = make_fit(w.size(), p, options);
  const CellTerms terms(w, p, fit.get());
  const int depth = w.grid().depth;
  std::vector<CubeSums> sums(lattice_->size());
  pairs_.resize(lattice_->size());
  for (int k = depth; k >= 0; --k) {
    const auto level = lattice_->level(k);
    for (int q : level) {
      CubeSums s = terms.zero();
      const DyadicCube& cube = lattice_->cube(q);
      if (k == depth) {
        for (int c : cube.cells) terms.add_cell(s, c);
      } else {
        for (int child : cube.children) terms.add(s, sums[child]);
      }
      sums[q] = std::move(s);
    }
    parallel_for(static_cast<int>(level.size()), [&](int i) {
      const int q = level[i];
      pairs_[q] = pair_from_sums(sums[q], static_cast<double>(lattice_->cube(q).cell_count()), w.size(), p,
                                 fit.get(), options);
    });
    if (k + 1 <= depth)
      for (int q : lattice_->level(k + 1)) sums[q] = CubeSums{};
  }
}

bool ReducingTable::all_certified() const {
  return std::all_of(pairs_.begin(), pairs_.end(), [](const ReducingPair& r) { return r.certified; });
}

std::vector<ReducingTable> reducing_tables(const MatrixWeight& w, double p, const CubeFamily& family,
                                           const ReducingOptions& options) {
  std::vector<ReducingTable> out;
  out.reserve(family.lattices().size());
  for (const auto& lattice : family.lattices()) out.emplace_back(w, p, lattice, options);
  return out;
}

}  // namespace mwlab
