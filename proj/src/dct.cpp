// Orthonormal 2-D DCT-II / DCT-III on top of FFTW's REDFT10 / REDFT01.
//
// FFTW's unnormalized REDFT10 computes Y[k] = 2 sum x[j] cos(pi (j + 1/2) k / n).
// The orthonormal DCT-II is s_k/2 * Y[k] with s_0 = sqrt(1/n), s_k = sqrt(2/n).
// REDFT01 computes Y[j] = X[0] + 2 sum_{k>=1} X[k] cos(pi (j + 1/2) k / n), so
// the orthonormal inverse pre-scales X[0] by s_0 and X[k] by s_k/2.

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "dct_raw.hpp"
#include "hdrmod/spud.hpp"

namespace hdrmod {

namespace {

// Planning is not thread-safe in FFTW; execution through the new-array
// interface is. Plans are created once per shape and shared.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t rows, std::size_t cols, bool inverse) {
    std::lock_guard lock(mutex_);
    const Key key{rows, cols, inverse};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    double* in = fftw_alloc_real(rows * cols);
    double* out = fftw_alloc_real(rows * cols);
    const fftw_r2r_kind kind = inverse ? FFTW_REDFT01 : FFTW_REDFT10;
    fftw_plan plan = fftw_plan_r2r_2d(static_cast<int>(rows), static_cast<int>(cols), in, out,
                                      kind, kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw Error("FFTW failed to create a DCT plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  struct Key {
    std::size_t rows;
    std::size_t cols;
    bool inverse;
    auto operator<=>(const Key&) const = default;
  };
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void require_plane(const Plane& u) {
  if (u.channels() != 1) throw ShapeError("DCT expects a single-channel plane");
  if (u.empty()) throw ShapeError("DCT of an empty plane");
}

}  // namespace

namespace detail {

void redft10_2d(std::size_t rows, std::size_t cols, const double* in, double* out) {
  fftw_execute_r2r(plan_cache().get(rows, cols, false), const_cast<double*>(in), out);
}

void redft01_2d(std::size_t rows, std::size_t cols, const double* in, double* out) {
  fftw_execute_r2r(plan_cache().get(rows, cols, true), const_cast<double*>(in), out);
}

std::vector<double> ortho_weights(std::size_t n) {
  std::vector<double> w(n, std::sqrt(2.0 / static_cast<double>(n)));
  w[0] = std::sqrt(1.0 / static_cast<double>(n));
  return w;
}

}  // namespace detail

using detail::ortho_weights;

SpectralField dct2(const Plane& u) {
  require_plane(u);
  const std::size_t rows = u.height();
  const std::size_t cols = u.width();
  SpectralField rho{Plane(rows, cols, 1)};
  detail::redft10_2d(rows, cols, u.values().data(), rho.coeffs.values().data());

  const auto wr = ortho_weights(rows);
  const auto wc = ortho_weights(cols);
  for (std::size_t m = 0; m < rows; ++m)
    for (std::size_t n = 0; n < cols; ++n) rho.coeffs(m, n) *= 0.25 * wr[m] * wc[n];
  return rho;
}

Plane idct2(const SpectralField& rho) {
  require_plane(rho.coeffs);
  const std::size_t rows = rho.rows();
  const std::size_t cols = rho.cols();
  auto wr = ortho_weights(rows);
  auto wc = ortho_weights(cols);
  for (std::size_t m = 1; m < rows; ++m) wr[m] *= 0.5;
  for (std::size_t n = 1; n < cols; ++n) wc[n] *= 0.5;

  Plane scaled(rows, cols, 1);
  for (std::size_t m = 0; m < rows; ++m)
    for (std::size_t n = 0; n < cols; ++n) scaled(m, n) = rho.coeffs(m, n) * wr[m] * wc[n];

  Plane u(rows, cols, 1);
  detail::redft01_2d(rows, cols, scaled.values().data(), u.values().data());
  return u;
}

}  // namespace hdrmod
