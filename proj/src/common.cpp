#include "mwlab/common.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace mwlab {

namespace {

double top_eigenvalue_2x2(const Mat& h) {
  const double a = h(0, 0).real();
  const double c = h(1, 1).real();
  const double half_diff = 0.5 * (a - c);
  return 0.5 * (a + c) + std::sqrt(half_diff * half_diff + std::norm(h(0, 1)));
}

}  // namespace

double spectral_norm_sq(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() == 1) return a.squaredNorm();
  if (a.cols() == 1) return a.squaredNorm();
  const Mat h = a.cols() <= a.rows() ? Mat(a.adjoint() * a) : Mat(a * a.adjoint());
  if (h.rows() == 2) return std::max(0.0, top_eigenvalue_2x2(h));
  Eigen::SelfAdjointEigenSolver<Mat> solver(h, Eigen::EigenvaluesOnly);
  return std::max(0.0, solver.eigenvalues().maxCoeff());
}

double spectral_norm(const Mat& a) { return std::sqrt(spectral_norm_sq(a)); }

HermitianEig hermitian_eig(const Mat& h) {
  HermitianEig out;
  if (h.rows() == 1) {
    out.values = RVec::Constant(1, h(0, 0).real());
    out.vectors = Mat::Identity(1, 1);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

Mat hermitian_apply(const HermitianEig& eig, const std::function<double(double)>& f) {
  const int n = static_cast<int>(eig.values.size());
  Mat scaled = eig.vectors;
  for (int j = 0; j < n; ++j) scaled.col(j) *= f(eig.values(j));
  Mat out = scaled * eig.vectors.adjoint();
  // re-symmetrise
  return Mat(0.5 * (out + out.adjoint()));
}

Mat hermitian_power(const Mat& h, double s) {
  return hermitian_apply(hermitian_eig(h), [s](double x) { return std::pow(x, s); });
}

double Rng::uniform() {
  // 53 random bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

double radical_inverse(int index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * (index % base);
    index /= base;
    f /= base;
  }
  return result;
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                           37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79};

}  // namespace

std::vector<Vec> sphere_directions(int n, int count) {
  if (n < 1 || n > kMaxMatrixSize) throw SizeError("sphere_directions: bad dimension");
  std::vector<Vec> out;
  out.reserve(count);
  // 2n real coordinates, generated pairwise from 2n Halton components.
  for (int i = 1; static_cast<int>(out.size()) < count; ++i) {
    Vec v(n);
    for (int j = 0; j < n; ++j) {
      const double u1 = radical_inverse(i, kPrimes[2 * j]);
      const double u2 = radical_inverse(i, kPrimes[2 * j + 1]);
      if (u1 <= 0.0) {
        v(j) = 0.0;
        continue;
      }
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double theta = 2.0 * std::numbers::pi * u2;
      v(j) = cplx(r * std::cos(theta), r * std::sin(theta));
    }
    const double norm = v.norm();
    if (norm < 1e-12) continue;
    out.push_back(v / norm);
  }
  return out;
}

int thread_count() {
  if (const char* env = std::getenv("MWLAB_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {
thread_local bool in_parallel_region = false;
}  // namespace

void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = in_parallel_region ? 1 : std::min(thread_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      in_parallel_region = true;
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mwlab
