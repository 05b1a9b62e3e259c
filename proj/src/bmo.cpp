#include "mwlab/bmo.hpp"

#include "mwlab/nested.hpp"

#include <algorithm>
#include <cmath>

namespace mwlab {

namespace {

void check_sizes(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v) {
  if (b.rows() != b.cols()) throw SizeError("symbol must be square");
  if (u.size() != b.cols() || v.size() != b.rows()) throw SizeError("symbol and weight sizes differ");
  if (!(b.grid() == u.grid()) || !(b.grid() == v.grid())) throw SizeError("symbol and weight grids differ");
}

std::size_t argmax_of(const std::vector<double>& local) {
  return static_cast<std::size_t>(std::max_element(local.begin(), local.end()) - local.begin());
}

CubeSup sup_of(std::vector<double> local) {
  CubeSup out;
  if (!local.empty()) {
    out.argmax = argmax_of(local);
    out.value = local[out.argmax];
  }
  out.local = std::move(local);
  return out;
}

/// Per-cell factors of K(x,y) = V^{1/p}(x)(B(x)-B(y))U^{-1/p}(y) = PB(x)N(y) - P(x)BN(y).
struct PairKernel {
  std::vector<Mat> p, pb, n, bn;

  PairKernel(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double pexp) {
    const MatrixWeight vp = v.power(1.0 / pexp);
    const MatrixWeight un = u.power(-1.0 / pexp);
    const int cells = b.cell_count();
    p.resize(cells);
    pb.resize(cells);
    n.resize(cells);
    bn.resize(cells);
    for (int c = 0; c < cells; ++c) {
      p[c] = vp[c];
      pb[c] = vp[c] * b[c];
      n[c] = un[c];
      bn[c] = b[c] * un[c];
    }
  }

  double norm_sq(int x, int y) const { return spectral_norm_sq(pb[x] * n[y] - p[x] * bn[y]); }
};

}  // namespace

BmoValue bmo_vu(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                const CubeFamily& cubes, BmoForm form, const ReducingOptions& options) {
  check_sizes(b, u, v);
  if (!(p > 1.0)) throw ConfigError("bmo_vu: p must exceed 1");
  std::vector<ReducingTable> tu, tv;
  MatrixWeight up, vp;
  if (form == BmoForm::reducing) {
    tu = reducing_tables(u, p, cubes, options);
    tv = reducing_tables(v, p, cubes, options);
  } else {
    up = u.power(1.0 / p);
    vp = v.power(1.0 / p);
  }
  std::vector<double> power(cubes.size());
  parallel_for(static_cast<int>(cubes.size()), [&](int i) {
    const DyadicCube& q = cubes[i];
    const auto ref = cubes.ref(i);
    Mat left, right;
    if (form == BmoForm::reducing) {
      left = tv[ref.lattice][ref.cube].primary;
      right = tu[ref.lattice][ref.cube].primary_inverse;
    } else {
      left = vp.average(q.cells);
      right = Mat(up.average(q.cells)).inverse();
    }
    const Mat mean = b.average(q.cells);
    double s = 0.0;
    for (int c : q.cells) s += spectral_norm(left * (b[c] - mean) * right);
    power[i] = s / static_cast<double>(q.cell_count());
  });
  BmoValue out;
  out.argmax = argmax_of(power);
  out.power = power[out.argmax];
  out.value = std::pow(out.power, 1.0 / p);
  out.local.resize(power.size());
  for (std::size_t i = 0; i < power.size(); ++i) out.local[i] = std::pow(power[i], 1.0 / p);
  return out;
}

BmoValue bmo_tilde(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                   const CubeFamily& cubes, Orientation orientation) {
  check_sizes(b, u, v);
  if (!(p > 1.0)) throw ConfigError("bmo_tilde: p must exceed 1");
  const double pp = conjugate_exponent(p);
  const PairKernel k(b, u, v, p);
  auto norm_sq = [&](int x, int y) { return k.norm_sq(x, y); };
  std::vector<double> power(cubes.size());
  parallel_for(static_cast<int>(cubes.size()), [&](int i) {
    const auto& cells = cubes[i].cells;
    power[i] = orientation == Orientation::primal ? detail::mixed_mean(cells, norm_sq, pp, p, false)
                                                  : detail::mixed_mean(cells, norm_sq, p, pp, true);
  });
  const double root = orientation == Orientation::primal ? p : pp;
  BmoValue out;
  out.argmax = argmax_of(power);
  out.power = power[out.argmax];
  out.value = std::pow(out.power, 1.0 / root);
  out.local.resize(power.size());
  for (std::size_t i = 0; i < power.size(); ++i) out.local[i] = std::pow(power[i], 1.0 / root);
  return out;
}

BmoReport jn_quantities(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                        const CubeFamily& cubes, const ReducingOptions& options) {
  check_sizes(b, u, v);
  if (!(p > 1.0)) throw ConfigError("jn_quantities: p must exceed 1");
  const double pp = conjugate_exponent(p);
  const auto tu = reducing_tables(u, p, cubes, options);
  const auto tv = reducing_tables(v, p, cubes, options);
  const PairKernel k(b, u, v, p);
  const MatrixWeight up = u.power(1.0 / p);
  const MatrixWeight vp = v.power(1.0 / p);
  const MatrixWeight un = u.power(-1.0 / p);
  const MatrixWeight vn = v.power(-1.0 / p);
  const MatrixField bstar = b.adjoint();

  const std::size_t count = cubes.size();
  std::vector<double> qa(count), qb(count), qc(count), qd(count), qe(count), hb(count), hc(count);
  parallel_for(static_cast<int>(count), [&](int i) {
    const DyadicCube& q = cubes[i];
    const auto ref = cubes.ref(i);
    const ReducingPair& ru = tu[ref.lattice][ref.cube];
    const ReducingPair& rv = tv[ref.lattice][ref.cube];
    const auto& cells = q.cells;
    const double size = static_cast<double>(cells.size());
    const Mat mean = b.average(cells);
    const Mat mean_star = mean.adjoint();
    double sa = 0.0, sb = 0.0, sc = 0.0, kb = 0.0, kc = 0.0;
    for (int x : cells) {
      const Mat diff = b[x] - mean;
      sa += spectral_norm(rv.primary * diff * ru.primary_inverse);
      sb += detail::pow_from_sq(spectral_norm_sq(vp[x] * diff * ru.primary_inverse), p);
      sc += detail::pow_from_sq(spectral_norm_sq(un[x] * (bstar[x] - mean_star) * rv.dual_inverse), pp);
      kb += detail::pow_from_sq(spectral_norm_sq(up[x] * ru.primary_inverse), p);
      kc += detail::pow_from_sq(spectral_norm_sq(rv.dual_inverse * vn[x]), pp);
    }
    qa[i] = sa / size;
    qb[i] = sb / size;
    qc[i] = sc / size;
    hb[i] = kb / size;
    hc[i] = kc / size;

    // d) and e) share the pair norms
    const std::size_t m = cells.size();
    std::vector<double> norms(m * m);
    for (std::size_t ix = 0; ix < m; ++ix)
      for (std::size_t iy = 0; iy < m; ++iy) norms[ix * m + iy] = k.norm_sq(cells[ix], cells[iy]);
    double sd = 0.0;
    for (std::size_t ix = 0; ix < m; ++ix) {
      double row = 0.0;
      for (std::size_t iy = 0; iy < m; ++iy) row += detail::pow_from_sq(norms[ix * m + iy], pp);
      sd += detail::pow_positive(row / size, p / pp);
    }
    double se = 0.0;
    for (std::size_t iy = 0; iy < m; ++iy) {
      double col = 0.0;
      for (std::size_t ix = 0; ix < m; ++ix) col += detail::pow_from_sq(norms[ix * m + iy], p);
      se += detail::pow_positive(col / size, pp / p);
    }
    qd[i] = sd / size;
    qe[i] = se / size;
  });

  BmoReport out;
  std::vector<double> ra(count), rb(count), rc(count), rd(count), re(count);
  for (std::size_t i = 0; i < count; ++i) {
    ra[i] = qa[i];
    rb[i] = std::pow(qb[i], 1.0 / p);
    rc[i] = std::pow(qc[i], 1.0 / pp);
    rd[i] = std::pow(qd[i], 1.0 / p);
    re[i] = std::pow(qe[i], 1.0 / pp);
    const double rhs_b = qd[i] * hb[i];
    const double rhs_c = qe[i] * hc[i];
    out.holder_b_excess = std::max(out.holder_b_excess, (qb[i] - rhs_b) / std::max(1.0, rhs_b));
    out.holder_c_excess = std::max(out.holder_c_excess, (qc[i] - rhs_c) / std::max(1.0, rhs_c));
  }
  out.a = sup_of(std::move(ra));
  out.b = sup_of(std::move(rb));
  out.c = sup_of(std::move(rc));
  out.d = sup_of(std::move(rd));
  out.e = sup_of(std::move(re));
  out.lambda1 = out.b;
  out.lambda2 = out.c;
  out.holder_b = std::move(hb);
  out.holder_c = std::move(hc);
  for (const CubeSup* s : {&out.a, &out.b, &out.c, &out.d, &out.e})
    out.argmax_cubes.push_back(count ? cubes.describe(s->argmax) : std::string());
  return out;
}

BmoValue bloom_scalar(std::span<const double> b, std::span<const double> u, std::span<const double> v, double p,
                      const CubeFamily& cubes) {
  if (!(p > 1.0)) throw ConfigError("bloom_scalar: p must exceed 1");
  const std::size_t cells = b.size();
  if (u.size() != cells || v.size() != cells) throw SizeError("bloom_scalar: size mismatch");
  std::vector<double> nu(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    if (!(u[c] > 0.0) || !(v[c] > 0.0)) throw WeightError("bloom_scalar: nonpositive weight", static_cast<int>(c));
    nu[c] = std::pow(u[c] / v[c], 1.0 / p);
  }
  std::vector<double> local(cubes.size());
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const auto& q = cubes[i].cells;
    double mean = 0.0, mass = 0.0, osc = 0.0;
    for (int c : q) mean += b[c];
    mean /= static_cast<double>(q.size());
    for (int c : q) {
      osc += std::abs(b[c] - mean);
      mass += nu[c];
    }
    local[i] = osc / mass;
  }
  BmoValue out;
  out.argmax = argmax_of(local);
  out.value = local[out.argmax];
  out.power = out.value;
  out.local = std::move(local);
  return out;
}

}  // namespace mwlab
