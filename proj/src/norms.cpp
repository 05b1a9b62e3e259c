#include "mwlab/norms.hpp"

#include "mwlab/generators.hpp"
#include "mwlab/nested.hpp"

#include <cmath>
#include <limits>

namespace mwlab {

namespace {

void check_operator(const LinearOperator& t, const MatrixWeight& u, const MatrixWeight& v) {
  if (!(t.grid == u.grid()) || !(t.grid == v.grid())) throw SizeError("operator norm: grid mismatch");
  if (t.in_size != u.size() || t.out_size != v.size()) throw SizeError("operator norm: weight sizes do not match");
}

/// A = V^{1/p} T U^{-1/p} and its adjoint.
struct Conjugated {
  LinearOperator t;
  MatrixField pre;       // U^{-1/p}
  MatrixField post;      // V^{1/p}
  MatrixField pre_adj;   // U^{-1/p} (Hermitian)
  MatrixField post_adj;  // V^{1/p}

  Conjugated(const LinearOperator& op, const MatrixWeight& u, const MatrixWeight& v, double p)
      : t(op),
        pre(u.power(-1.0 / p).as_field()),
        post(v.power(1.0 / p).as_field()),
        pre_adj(pre),
        post_adj(post) {}

  VectorField apply(const VectorField& f) const { return multiply(post, t.apply(multiply(pre, f))); }
  VectorField adjoint(const VectorField& g) const { return multiply(pre_adj, t.adjoint(multiply(post_adj, g))); }
};

double lp(const VectorField& f, double p) { return f.lp_norm(p); }

VectorField random_start(const GridSpec& grid, int n, std::uint64_t seed) { return random_field(grid, n, seed); }

}  // namespace

double norm_ratio(const LinearOperator& t, const MatrixWeight& u, const MatrixWeight& v, double p,
                  const VectorField& f) {
  check_operator(t, u, v);
  const Conjugated a(t, u, v, p);
  const double denom = lp(f, p);
  if (denom == 0.0) return 0.0;
  return lp(a.apply(f), p) / denom;
}

NormEstimate opnorm_p2(const LinearOperator& t, const MatrixWeight& u, const MatrixWeight& v,
                       const NormOptions& options) {
  check_operator(t, u, v);
  const Conjugated a(t, u, v, 2.0);
  const GridSpec& grid = t.grid;
  const int n = t.in_size;
  const auto dim = static_cast<Eigen::Index>(grid.cell_count()) * n;
  const Eigen::Index steps = std::min<Eigen::Index>(dim, std::max(1, options.max_iterations));

  Eigen::MatrixXcd basis(dim, steps);
  std::vector<double> alpha, beta;
  std::uint64_t stream = 0;
  auto fresh = [&]() {
    for (int attempt = 0; attempt < 8; ++attempt) {
      VectorField r = random_start(grid, n, derive_seed(options.seed, stream++));
      Eigen::VectorXcd x = r.flat();
      const Eigen::Index k = static_cast<Eigen::Index>(alpha.size());
      for (int pass = 0; pass < 2 && k > 0; ++pass) x -= basis.leftCols(k) * (basis.leftCols(k).adjoint() * x);
      const double norm = x.norm();
      if (norm > 1e-8) return Eigen::VectorXcd(x / norm);
    }
    return Eigen::VectorXcd(Eigen::VectorXcd::Zero(dim));
  };

  NormEstimate out;
  out.mode = NormEstimate::Mode::exact_p2;
  Eigen::VectorXcd q = fresh();
  double theta = 0.0;
  double previous = -1.0;
  Eigen::VectorXd ritz;
  int stagnant = 0;
  for (Eigen::Index k = 0; k < steps; ++k) {
    basis.col(k) = q;
    VectorField qf(grid, n, std::vector<cplx>(q.data(), q.data() + dim));
    const VectorField w_field = a.adjoint(a.apply(qf));
    Eigen::VectorXcd w = w_field.flat();
    const double ak = q.dot(w).real();
    alpha.push_back(ak);
    // full reorthogonalisation, twice
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
    double bk = w.norm();

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = beta.empty() ? Eigen::VectorXd() : Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    theta = std::max(0.0, tri.eigenvalues()(m - 1));
    ritz = tri.eigenvectors().col(m - 1);
    const double residual = bk * std::abs(ritz(m - 1));
    out.iterations = static_cast<int>(k + 1);
    out.residual = theta > 0.0 ? residual / theta : residual;
    if (theta == 0.0 && k + 1 >= std::min<Eigen::Index>(dim, 4)) break;
    if (out.residual <= options.tolerance) break;
    if (previous >= 0.0 && std::abs(theta - previous) <= 1e-15 * theta) {
      if (++stagnant >= 3) break;
    } else {
      stagnant = 0;
    }
    previous = theta;
    if (k + 1 == steps) break;
    if (bk <= 1e-12 * std::max(theta, 1e-300)) {
      // invariant subspace reached: continue in a fresh direction
      q = fresh();
      if (q.isZero(0.0)) break;
      beta.push_back(0.0);
    } else {
      q = w / bk;
      beta.push_back(bk);
    }
  }
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXcd x = basis.leftCols(m) * ritz.cast<cplx>();
  const double xnorm = x.norm();
  if (xnorm > 0.0) x /= xnorm;
  out.witness = VectorField(grid, n, std::vector<cplx>(x.data(), x.data() + dim));
  out.converged = out.residual <= std::max(options.tolerance, 1e-6) || m == dim;
  out.value = xnorm > 0.0 ? lp(a.apply(out.witness), 2.0) / lp(out.witness, 2.0) : 0.0;
  return out;
}

namespace {

/// J_r(g) = |g|^{r-2} g / ||g||_r^{r-1}: the unit-norm dual element of g.
VectorField duality_map(const VectorField& g, double r) {
  const double norm = g.lp_norm(r);
  VectorField out(g.grid(), g.size());
  if (norm == 0.0) return out;
  const double scale = 1.0 / std::pow(norm, r - 1.0);
  for (int c = 0; c < g.cell_count(); ++c) {
    const Vec v = g.at(c);
    const double len = v.norm();
    if (len == 0.0) continue;
    out.set(c, (detail::pow_positive(len, r - 2.0) * scale) * v);
  }
  return out;
}

}  // namespace

NormEstimate opnorm_lower(const LinearOperator& t, const MatrixWeight& u, const MatrixWeight& v, double p,
                          const NormOptions& options) {
  if (!(p > 1.0)) throw ConfigError("opnorm_lower: p must exceed 1");
  check_operator(t, u, v);
  const Conjugated a(t, u, v, p);
  const double pp = conjugate_exponent(p);
  const int restarts = std::max(1, options.restarts);
  std::vector<NormEstimate> runs(restarts);
  parallel_for(restarts, [&](int r) {
    NormEstimate& run = runs[r];
    run.mode = NormEstimate::Mode::lower_bound;
    VectorField x = random_start(t.grid, t.in_size, derive_seed(options.seed, 1000 + r));
    x.flat() /= x.lp_norm(p);
    double value = a.apply(x).lp_norm(p);
    run.converged = false;
    for (int it = 0; it < options.ascent_iterations; ++it) {
      const VectorField y = a.apply(x);
      value = y.lp_norm(p);
      run.iterations = it + 1;
      if (value == 0.0) {
        run.converged = true;
        break;
      }
      const VectorField z = a.adjoint(duality_map(y, p));
      const VectorField next = duality_map(z, pp);
      if (next.lp_norm(p) == 0.0) break;
      const double next_value = a.apply(next).lp_norm(p);
      run.residual = std::abs(next_value - value) / value;
      if (next_value >= value) x = next;
      if (run.residual <= options.tolerance * 1e-3 || next_value < value) {
        value = std::max(value, next_value);
        run.converged = true;
        break;
      }
      value = next_value;
    }
    run.witness = x;
    run.value = a.apply(x).lp_norm(p) / x.lp_norm(p);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].value > runs[best].value) best = r;
  return runs[best];
}

NormEstimate commutator_norm(const MatrixField& b, const Czo& t, const MatrixWeight& u, const MatrixWeight& v,
                             double p, const NormOptions& options) {
  const LinearOperator op = LinearOperator::commutator(b, t);
  if (p == 2.0) return opnorm_p2(op, u, v, options);
  return opnorm_lower(op, u, v, p, options);
}

}  // namespace mwlab
