#include "hdrmod/spud.hpp"

#include "dct_raw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace hdrmod {

double centered_modulo(double d, const SensorConfig& cfg) {
  const double period = cfg.period();
  const double half = cfg.half_period();
  const double shifted = d + half;
  return shifted - period * std::floor(shifted / period) - half;
}

GradientField forward_diff(const Plane& u) {
  if (u.channels() != 1) throw ShapeError("forward_diff expects a single-channel plane");
  if (u.height() < 2 || u.width() < 2) throw InvalidImage("forward_diff needs at least 2x2");
  const std::size_t rows = u.height();
  const std::size_t cols = u.width();
  GradientField g{Plane(rows, cols, 1), Plane(rows, cols, 1)};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.gx(r, c) = u(r, c + 1) - u(r, c);
      if (r + 1 < rows) g.gy(r, c) = u(r + 1, c) - u(r, c);
    }
  }
  return g;
}

Plane neg_divergence(const GradientField& g) {
  if (!g.gx.same_shape(g.gy) || g.gx.channels() != 1)
    throw ShapeError("gradient components must be single-channel planes of equal shape");
  const std::size_t rows = g.gx.height();
  const std::size_t cols = g.gx.width();
  Plane out(rows, cols, 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      // The last column of gx and last row of gy are structurally zero in the
      // range of forward_diff; the adjoint never reads them.
      if (c + 1 < cols) v -= g.gx(r, c);
      if (c > 0) v += g.gx(r, c - 1);
      if (r + 1 < rows) v -= g.gy(r, c);
      if (r > 0) v += g.gy(r - 1, c);
      out(r, c) = v;
    }
  }
  return out;
}

SpectralField hard_threshold(const SpectralField& rho, double tau) {
  if (!(tau >= 0.0)) throw InvalidParam("threshold must be nonnegative");
  SpectralField out = rho;
  for (double& v : out.coeffs.values())
    if (!(std::abs(v) > tau)) v = 0.0;
  return out;
}

double laplacian_eigenvalue(std::size_t m, std::size_t n, std::size_t rows, std::size_t cols) {
  constexpr double pi = std::numbers::pi;
  return 2.0 * (2.0 - std::cos(pi * static_cast<double>(m) / static_cast<double>(rows)) -
                std::cos(pi * static_cast<double>(n) / static_cast<double>(cols)));
}

Plane poisson_solve(const SpectralField& rho) {
  const std::size_t rows = rho.rows();
  const std::size_t cols = rho.cols();
  constexpr double pi = std::numbers::pi;
  std::vector<double> row_part(rows);
  std::vector<double> col_part(cols);
  for (std::size_t m = 0; m < rows; ++m)
    row_part[m] = 2.0 - 2.0 * std::cos(pi * static_cast<double>(m) / static_cast<double>(rows));
  for (std::size_t n = 0; n < cols; ++n)
    col_part[n] = 2.0 - 2.0 * std::cos(pi * static_cast<double>(n) / static_cast<double>(cols));

  SpectralField solution{Plane(rows, cols, 1)};
  for (std::size_t m = 0; m < rows; ++m)
    for (std::size_t n = 0; n < cols; ++n)
      if (m != 0 || n != 0) solution.coeffs(m, n) = rho.coeffs(m, n) / (row_part[m] + col_part[n]);
  // DC is unobservable from gradients.
  solution.coeffs(0, 0) = 0.0;
  return idct2(solution);
}

Plane spud_unwrap_plane(const Plane& codes, const SensorConfig& cfg, double tau) {
  GradientField g = forward_diff(codes);
  for (double& v : g.gx.values()) v = centered_modulo(v, cfg);
  for (double& v : g.gy.values()) v = centered_modulo(v, cfg);
  return poisson_solve(hard_threshold(dct2(neg_divergence(g)), tau));
}

namespace {

// Same computation as spud_unwrap_plane, fused into three passes over
// reusable buffers: codes -> -div of wrapped gradients, one spectral pass
// (orthonormal scaling, threshold, Poisson division, inverse scaling), and
// the two transforms. Integer code differences make the centred modulo a
// pair of comparisons.
void unwrap_channel(const Image<std::uint16_t>& codes, std::size_t ch, const SensorConfig& cfg,
                    double tau, std::vector<double>& x) {
  const std::size_t rows = codes.height();
  const std::size_t cols = codes.width();
  const std::size_t stride = codes.channels();
  const std::uint16_t* y = codes.values().data() + ch;
  const int period = static_cast<int>(cfg.wrap_period());
  const int half = period / 2;
  auto wrapped = [&](std::size_t a, std::size_t b) {
    int d = static_cast<int>(y[b * stride]) - static_cast<int>(y[a * stride]);
    if (d >= half) d -= period;
    else if (d < -half) d += period;
    return static_cast<double>(d);
  };

  thread_local std::vector<double> div, spectrum;
  div.resize(rows * cols);
  spectrum.resize(rows * cols);
  x.resize(rows * cols);

  // -div g at (r, c) = g_x(r, c-1) - g_x(r, c) + g_y(r-1, c) - g_y(r, c),
  // with the Neumann zeros at the last column / row.
  for (std::size_t r = 0; r < rows; ++r) {
    double left = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      const double right = c + 1 < cols ? wrapped(i, i + 1) : 0.0;
      const double down = r + 1 < rows ? wrapped(i, i + cols) : 0.0;
      const double up = r > 0 ? wrapped(i - cols, i) : 0.0;
      div[i] = left - right + up - down;
      left = right;
    }
  }

  detail::redft10_2d(rows, cols, div.data(), spectrum.data());

  constexpr double pi = std::numbers::pi;
  const auto wr = detail::ortho_weights(rows);
  const auto wc = detail::ortho_weights(cols);
  std::vector<double> lam_r(rows), lam_c(cols), fwd_c(cols), inv_c(cols);
  for (std::size_t m = 0; m < rows; ++m)
    lam_r[m] = 2.0 - 2.0 * std::cos(pi * static_cast<double>(m) / static_cast<double>(rows));
  for (std::size_t n = 0; n < cols; ++n) {
    lam_c[n] = 2.0 - 2.0 * std::cos(pi * static_cast<double>(n) / static_cast<double>(cols));
    fwd_c[n] = 0.25 * wc[n];
    inv_c[n] = n == 0 ? wc[n] : 0.5 * wc[n];
  }
  for (std::size_t m = 0; m < rows; ++m) {
    const double fwd_r = wr[m];
    const double inv_r = m == 0 ? wr[m] : 0.5 * wr[m];
    double* row = spectrum.data() + m * cols;
    for (std::size_t n = 0; n < cols; ++n) {
      const double rho = row[n] * fwd_r * fwd_c[n];
      row[n] = std::abs(rho) > tau && (m | n) != 0 ? rho / (lam_r[m] + lam_c[n]) * inv_r * inv_c[n] : 0.0;
    }
  }

  detail::redft01_2d(rows, cols, spectrum.data(), x.data());
}

}  // namespace

HdrImage spud_reconstruct(const ModuloImage& y, const SensorConfig& cfg,
                          const RecoveryParams& params) {
  if (y.bit_depth() != cfg.bit_depth())
    throw ConfigError("modulo image bit depth does not match the sensor configuration");
  if (!(params.tau >= 0.0)) throw InvalidParam("threshold must be nonnegative");
  const auto& codes = y.codes();
  if (codes.height() < 2 || codes.width() < 2) throw InvalidImage("recovery needs at least 2x2");

  const std::size_t channels = codes.channels();
  Image<double> out(codes.height(), codes.width(), channels);
  const double period = cfg.period();
  constexpr double kTolerance = 1e-6;
  thread_local std::vector<double> x;

  for (std::size_t ch = 0; ch < channels; ++ch) {
    unwrap_channel(codes, ch, cfg, params.tau, x);
    const double lowest = *std::min_element(x.begin(), x.end());

    double shift = 0.0;
    if (params.anchor == AnchorPolicy::ZeroMin) {
      shift = -lowest;
    } else {
      shift = static_cast<double>(codes(0, 0, ch)) - x[0];
      const double k = std::ceil((-kTolerance - (lowest + shift)) / period);
      shift += k * period;
    }
    double* dst = out.values().data() + ch;
    for (std::size_t i = 0; i < x.size(); ++i) dst[i * channels] = std::max(0.0, x[i] + shift);
  }
  return HdrImage(std::move(out));
}

HdrImage sequential_unwrap_oracle(const ModuloImage& y, const SensorConfig& cfg) {
  const auto& codes = y.codes();
  const std::int64_t period = cfg.wrap_period();
  const std::int64_t half = period / 2;
  auto wrap = [&](std::int64_t d) {
    std::int64_t r = (d + half) % period;
    if (r < 0) r += period;
    return r - half;
  };

  const std::size_t rows = codes.height();
  const std::size_t cols = codes.width();
  Image<double> out(rows, cols, codes.channels());
  std::vector<std::int64_t> level(rows * cols);
  for (std::size_t ch = 0; ch < codes.channels(); ++ch) {
    auto at = [&](std::size_t r, std::size_t c) -> std::int64_t { return codes(r, c, ch); };
    level[0] = at(0, 0);
    for (std::size_t r = 1; r < rows; ++r)
      level[r * cols] = level[(r - 1) * cols] + wrap(at(r, 0) - at(r - 1, 0));
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 1; c < cols; ++c)
        level[r * cols + c] = level[r * cols + c - 1] + wrap(at(r, c) - at(r, c - 1));

    const std::int64_t lowest = *std::min_element(level.begin(), level.end());
    // Smallest multiple of the period that brings the minimum into [0, period).
    std::int64_t k = lowest >= 0 ? -(lowest / period) : (-lowest + period - 1) / period;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        out(r, c, ch) = static_cast<double>(level[r * cols + c] + k * period);
  }
  return HdrImage(std::move(out));
}

}  // namespace hdrmod
