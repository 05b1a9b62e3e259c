#include "mwlab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mwlab {

YoungFunction YoungFunction::power(double r) {
  if (!(r > 1.0)) throw ConfigError("power Young function needs r > 1");
  return YoungFunction(Kind::power, r, 0.0);
}

YoungFunction YoungFunction::power_log_bump(double r, double delta) {
  if (!(r > 1.0) || !(delta >= 0.0)) throw ConfigError("power-log bump needs r > 1 and delta >= 0");
  return YoungFunction(Kind::power_log_bump, r, delta);
}

double YoungFunction::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (kind_ == Kind::power) return std::pow(t, r_) / r_;
  return std::pow(t, r_) * std::pow(std::log(std::numbers::e + t), delta_);
}

double YoungFunction::derivative(double t) const {
  if (t <= 0.0) return 0.0;
  if (kind_ == Kind::power) return std::pow(t, r_ - 1.0);
  const double l = std::log(std::numbers::e + t);
  return std::pow(t, r_ - 1.0) * std::pow(l, delta_ - 1.0) * (r_ * l + delta_ * t / (std::numbers::e + t));
}

double YoungFunction::conjugate(double s) const {
  if (s <= 0.0) return 0.0;
  if (kind_ == Kind::power) {
    const double rc = conjugate_exponent(r_);
    return std::pow(s, rc) / rc;
  }
  // the maximiser solves C'(t) = s
  double lo = 0.0, hi = 1.0;
  while (derivative(hi) < s) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (derivative(mid) < s ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return s * t - (*this)(t);
}

std::string YoungFunction::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::power) {
    os << "t^" << r_ << "/" << r_;
  } else {
    os << "t^" << r_ << " log(e+t)^" << delta_;
  }
  return os.str();
}

std::pair<YoungFunction, YoungFunction> bump_pair(double p, double eta) {
  if (!(eta > 0.0)) throw ConfigError("bump parameter must be positive");
  const double pp = conjugate_exponent(p);
  return {YoungFunction::power_log_bump(p, p - 1.0 + eta), YoungFunction::power_log_bump(pp, pp - 1.0 + eta)};
}

double luxemburg(std::span<const double> values, const YoungFunction& c) {
  double top = 0.0;
  for (double v : values) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  const double count = static_cast<double>(values.size());
  auto mean_at = [&](double lambda) {
    double s = 0.0;
    for (double v : values) s += c(std::abs(v) / lambda);
    return s / count;
  };
  // bracket: mean_at(lo) > 1 >= mean_at(hi)
  double hi = top;
  while (mean_at(hi) > 1.0) hi *= 2.0;
  double lo = hi * 0.5;
  while (mean_at(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
  }
  double llo = std::log(lo), lhi = std::log(hi);
  while (lhi - llo > 1e-13) {
    const double mid = 0.5 * (llo + lhi);
    (mean_at(std::exp(mid)) > 1.0 ? llo : lhi) = mid;
  }
  return std::exp(lhi);
}

double luxemburg(std::span<const double> field, const YoungFunction& c, const DyadicCube& q) {
  std::vector<double> values;
  values.reserve(q.cells.size());
  for (int cell : q.cells) values.push_back(field[cell]);
  return luxemburg(values, c);
}

namespace {

/// || ||K||_{inner, one variable} ||_{outer, other variable} over one cube,
/// from a row-major |Q| x |Q| table norms[x][y] = |K(x, y)|.
double nested_norm(const std::vector<double>& norms, std::size_t m, const YoungFunction& inner,
                   const YoungFunction& outer, bool inner_over_x) {
  std::vector<double> line(m), partial(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) line[b] = inner_over_x ? norms[b * m + a] : norms[a * m + b];
    partial[a] = luxemburg(line, inner);
  }
  return luxemburg(partial, outer);
}

template <class Kernel>
std::vector<double> norm_table(const std::vector<int>& cells, Kernel&& kernel) {
  const std::size_t m = cells.size();
  std::vector<double> out(m * m);
  for (std::size_t ix = 0; ix < m; ++ix)
    for (std::size_t iy = 0; iy < m; ++iy) out[ix * m + iy] = kernel(cells[ix], cells[iy]);
  return out;
}

BumpReport compute(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                   const YoungFunction& c, const YoungFunction& d, const YoungFunction* e, const YoungFunction* f,
                   const CubeFamily& cubes) {
  if (b.rows() != b.cols() || u.size() != b.cols() || v.size() != b.rows())
    throw SizeError("bump constants: size mismatch");
  const MatrixWeight vp = v.power(1.0 / p);
  const MatrixWeight un = u.power(-1.0 / p);
  const std::size_t count = cubes.size();
  std::vector<double> k1(count), k2(count), m1(count), m2(count), m3(count), m4(count);
  parallel_for(static_cast<int>(count), [&](int i) {
    const auto& cells = cubes[i].cells;
    const std::size_t m = cells.size();
    const auto kappa = norm_table(cells, [&](int x, int y) { return spectral_norm(vp[x] * (b[x] - b[y]) * un[y]); });
    k1[i] = nested_norm(kappa, m, c, d, true);
    k2[i] = nested_norm(kappa, m, d, c, false);
    if (e == nullptr) return;
    const Mat mean = b.average(cells);
    const auto left = norm_table(cells, [&](int x, int y) { return spectral_norm(vp[x] * (b[x] - mean) * un[y]); });
    m1[i] = nested_norm(left, m, *e, *f, true);
    m2[i] = nested_norm(left, m, *f, *e, false);
    const auto right = norm_table(cells, [&](int x, int y) { return spectral_norm(vp[x] * (b[y] - mean) * un[y]); });
    m3[i] = nested_norm(right, m, c, d, true);
    m4[i] = nested_norm(right, m, d, c, false);
  });
  BumpReport out;
  auto sup = [](const std::vector<double>& v, std::size_t* arg) {
    const auto it = std::max_element(v.begin(), v.end());
    if (arg) *arg = static_cast<std::size_t>(it - v.begin());
    return v.empty() ? 0.0 : *it;
  };
  out.kappa1 = sup(k1, &out.argmax_kappa1);
  out.kappa2 = sup(k2, &out.argmax_kappa2);
  out.mu1 = sup(m1, nullptr);
  out.mu2 = sup(m2, nullptr);
  out.mu3 = sup(m3, nullptr);
  out.mu4 = sup(m4, nullptr);
  out.lambda1 = std::min(out.mu1, out.mu2);
  out.lambda2 = std::min(out.mu3, out.mu4);
  return out;
}

}  // namespace

BumpReport bump_constants(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                          const YoungFunction& c, const YoungFunction& d, const YoungFunction& e,
                          const YoungFunction& f, const CubeFamily& cubes) {
  return compute(b, u, v, p, c, d, &e, &f, cubes);
}

BumpReport kappa_constants(const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p,
                           const YoungFunction& c, const YoungFunction& d, const CubeFamily& cubes) {
  return compute(b, u, v, p, c, d, nullptr, nullptr, cubes);
}

}  // namespace mwlab
