#include "mwlab/blocktrick.hpp"

#include "mwlab/bmo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mwlab {

namespace {

double entrywise_residual(const Mat& a, const Mat& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j))));
  return worst;
}

Mat block(const Mat& a, const Mat& k, const Mat& c) {
  const auto m = a.rows();
  Mat out = Mat::Zero(2 * m, 2 * m);
  out.topLeftCorner(m, m) = a;
  out.topRightCorner(m, m) = k;
  out.bottomRightCorner(m, m) = c;
  return out;
}

}  // namespace

BlockField build_phi(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p) {
  if (!(p > 1.0)) throw ConfigError("build_phi: p must exceed 1");
  if (b.rows() != b.cols() || u.size() != b.rows() || v.size() != b.rows())
    throw SizeError("build_phi: B, U and V must share one size");
  if (2 * b.rows() > kMaxMatrixSize) throw SizeError("build_phi: block size exceeds the supported maximum");
  if (!(b.grid() == u.grid()) || !(b.grid() == v.grid())) throw SizeError("build_phi: grid mismatch");
  BlockField out;
  out.grid = b.grid();
  out.m = b.rows();
  out.p = p;
  out.b = b;
  out.u = u;
  out.v = v;
  const MatrixWeight vp = v.power(1.0 / p), vn = v.power(-1.0 / p);
  const MatrixWeight up = u.power(1.0 / p), un = u.power(-1.0 / p);
  const int cells = b.cell_count();
  std::vector<Mat> phi(cells), inv(cells);
  std::vector<double> residual(cells);
  parallel_for(cells, [&](int c) {
    phi[c] = block(vp[c], vp[c] * b[c], up[c]);
    inv[c] = block(vn[c], -b[c] * un[c], un[c]);
    residual[c] = entrywise_residual(phi[c] * inv[c], Mat::Identity(2 * out.m, 2 * out.m));
  });
  for (int c = 0; c < cells; ++c) {
    if (!(residual[c] <= 1e-10)) throw WeightError("build_phi: inverse formula fails", c);
    out.inverse_residual = std::max(out.inverse_residual, residual[c]);
  }
  out.phi = MatrixField(b.grid(), std::move(phi));
  out.phi_inverse = MatrixField(b.grid(), std::move(inv));
  return out;
}

MatrixWeight build_w(const BlockField& phi, double p) {
  if (!(p > 1.0)) throw ConfigError("build_w: p must exceed 1");
  const int cells = phi.phi.cell_count();
  std::vector<Mat> w(cells);
  parallel_for(cells, [&](int c) {
    const Mat& f = phi.phi[c];
    w[c] = p == 2.0 ? Mat(f.adjoint() * f) : hermitian_power(Mat(f.adjoint() * f), 0.5 * p);
  });
  return MatrixWeight(phi.grid, std::move(w), std::numeric_limits<double>::infinity());
}

std::vector<std::pair<int, int>> sample_pairs(const CubeFamily& cubes, std::uint64_t seed) {
  std::vector<int> all;
  for (std::size_t i = 0; i < cubes.size(); ++i) all.insert(all.end(), cubes[i].cells.begin(), cubes[i].cells.end());
  const CellSet cells = make_cell_set(std::move(all));
  std::vector<std::pair<int, int>> out;
  if (cells.size() <= 4096) {
    out.reserve(cells.size() * cells.size());
    for (int x : cells)
      for (int y : cells) out.emplace_back(x, y);
    return out;
  }
  Rng rng(derive_seed(seed, 0x70616972));
  const int last = static_cast<int>(cells.size()) - 1;
  out.reserve(1 << 16);
  for (int i = 0; i < (1 << 16); ++i) out.emplace_back(cells[rng.integer(0, last)], cells[rng.integer(0, last)]);
  return out;
}

PhiIdentityReport phi_identity_check(const BlockField& phi, const CubeFamily& cubes) {
  const double p = phi.p;
  const int m = phi.m;
  const MatrixWeight vp = phi.v.power(1.0 / p), vn = phi.v.power(-1.0 / p);
  const MatrixWeight up = phi.u.power(1.0 / p), un = phi.u.power(-1.0 / p);
  // W^{1/p} = (Phi^* Phi)^{1/2}, taken through W itself
  const MatrixWeight w = build_w(phi, p);
  const MatrixWeight wp = w.power(1.0 / p), wn = w.power(-1.0 / p);

  const auto pairs = sample_pairs(cubes);
  PhiIdentityReport out;
  out.pairs = pairs.size();
  out.inverse_residual = phi.inverse_residual;
  const int chunks = std::max(1, std::min<int>(64, static_cast<int>(pairs.size())));
  std::vector<double> br(chunks, 0.0), pr(chunks, 0.0), se(chunks, -std::numeric_limits<double>::infinity());
  parallel_for(chunks, [&](int chunk) {
    const std::size_t lo = pairs.size() * chunk / chunks, hi = pairs.size() * (chunk + 1) / chunks;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto [x, y] = pairs[i];
      const Mat prod = phi.phi[x] * phi.phi_inverse[y];
      const Mat corner = vp[x] * (phi.b[x] - phi.b[y]) * un[y];
      const Mat expected = block(vp[x] * vn[y], corner, up[x] * un[y]);
      br[chunk] = std::max(br[chunk], entrywise_residual(prod, expected));
      const double full = spectral_norm(prod);
      const double polar = spectral_norm(wp[x] * wn[y]);
      pr[chunk] = std::max(pr[chunk], std::abs(full - polar) / std::max(full, 1e-300));
      const double off = spectral_norm(Mat(prod.topRightCorner(m, m)));
      se[chunk] = std::max(se[chunk], (off - full) / std::max(full, 1e-300));
    }
  });
  out.block_residual = *std::max_element(br.begin(), br.end());
  out.polar_residual = *std::max_element(pr.begin(), pr.end());
  out.sandwich_excess = pairs.empty() ? 0.0 : *std::max_element(se.begin(), se.end());
  return out;
}

TriangleReport ap_triangle_check(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                                 const CubeFamily& cubes) {
  TriangleReport out;
  out.p = p;
  out.factor = std::pow(3.0, p / conjugate_exponent(p));
  const MatrixWeight w = build_w(build_phi(b, u, v, p), p);
  const CubeSup aw = ap_characteristic(w, p, cubes);
  const CubeSup au = ap_characteristic(u, p, cubes);
  const CubeSup av = ap_characteristic(v, p, cubes);
  const BmoValue tilde = bmo_tilde(b, u, v, p, cubes, Orientation::primal);
  out.ap_w = aw.value;
  out.ap_u = au.value;
  out.ap_v = av.value;
  out.tilde_power = std::pow(tilde.value, p);
  out.local_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const double rhs = out.factor * (au.local[i] + av.local[i] + std::pow(tilde.local[i], p));
    const double excess = (aw.local[i] - rhs) / std::max(1.0, rhs);
    if (excess > out.local_excess) {
      out.local_excess = excess;
      out.worst_cube = i;
    }
  }
  const double sum = out.ap_u + out.ap_v + out.tilde_power;
  out.ratio = out.ap_w / sum;
  const double lower = std::max({out.ap_u, out.ap_v, out.tilde_power});
  out.lower_excess = (lower - out.ap_w) / std::max(1.0, out.ap_w);
  return out;
}

std::vector<RescalingPoint> rescaling_sweep(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v,
                                            double p, const CubeFamily& cubes, const std::vector<double>& rs) {
  std::vector<RescalingPoint> out;
  const double ap_u = ap_characteristic(u, p, cubes).value;
  const double ap_v = ap_characteristic(v, p, cubes).value;
  const double tilde = std::pow(bmo_tilde(b, u, v, p, cubes).value, p);
  for (double r : rs) {
    RescalingPoint point;
    point.r = r;
    point.ap_w = ap_characteristic(build_w(build_phi(b.scaled(r), u, v, p), p), p, cubes).value;
    point.rhs = ap_u + ap_v + std::pow(r, p) * tilde;
    point.ratio = point.ap_w / point.rhs;
    out.push_back(point);
  }
  return out;
}

}  // namespace mwlab
