#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "hdrmod/spud.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace hdrmod {
namespace {

using testing::inner;
using testing::max_abs;
using testing::max_abs_diff;

Plane plane_from(std::initializer_list<std::initializer_list<double>> rows) {
  Plane p(rows.size(), rows.begin()->size(), 1);
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (double v : row) p(r, c++) = v;
    ++r;
  }
  return p;
}

Plane random_plane(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  return testing::random_image(rows, cols, 1, rng);
}

ModuloImage codes_from(const Image<double>& x, const SensorConfig& cfg) {
  return wrap_modulo(HdrImage(x), cfg);
}

double mean(const Image<double>& x) {
  double s = 0.0;
  for (double v : x.values()) s += v;
  return s / static_cast<double>(x.size());
}

double aligned_max_error(const Image<double>& a, const Image<double>& b) {
  const double offset = mean(a) - mean(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.values()[i] - b.values()[i] - offset));
  return worst;
}

double aligned_rms(const Image<double>& a, const Image<double>& b) {
  const double offset = mean(a) - mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values()[i] - b.values()[i] - offset;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(a.size()));
}

TEST(CenteredModuloTest, Examples) {
  const SensorConfig cfg(8);
  EXPECT_EQ(centered_modulo(200.0, cfg), -56.0);
  EXPECT_EQ(centered_modulo(127.0, cfg), 127.0);
  EXPECT_EQ(centered_modulo(128.0, cfg), -128.0);
  EXPECT_EQ(centered_modulo(-128.0, cfg), -128.0);
  EXPECT_EQ(centered_modulo(-129.0, cfg), 127.0);
}

TEST(CenteredModuloTest, RangeAndCongruenceOnReals) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-5000.0, 5000.0);
  for (int b : {1, 3, 8, 12}) {
    const SensorConfig cfg(b);
    for (int i = 0; i < 2000; ++i) {
      const double d = dist(rng);
      const double m = centered_modulo(d, cfg);
      EXPECT_GE(m, -cfg.half_period());
      EXPECT_LT(m, cfg.half_period());
      const double k = (d - m) / cfg.period();
      EXPECT_NEAR(k, std::round(k), 1e-9);
    }
  }
}

TEST(ForwardDiffTest, Examples) {
  const GradientField zero = forward_diff(Plane(3, 4, 1, 7.0));
  EXPECT_EQ(max_abs(zero.gx), 0.0);
  EXPECT_EQ(max_abs(zero.gy), 0.0);

  const GradientField row = forward_diff(plane_from({{0, 1, 2}, {0, 1, 2}}));
  EXPECT_EQ(row.gx(0, 0), 1.0);
  EXPECT_EQ(row.gx(0, 1), 1.0);
  EXPECT_EQ(row.gx(0, 2), 0.0);

  const GradientField g = forward_diff(plane_from({{0, 2}, {3, 7}}));
  EXPECT_EQ(g.gx, plane_from({{2, 0}, {4, 0}}));
  EXPECT_EQ(g.gy, plane_from({{3, 5}, {0, 0}}));
}

TEST(ForwardDiffTest, RejectsTinyImages) {
  EXPECT_THROW(forward_diff(Plane(1, 4, 1)), InvalidImage);
  EXPECT_THROW(forward_diff(Plane(4, 1, 1)), InvalidImage);
}

TEST(ForwardDiffTest, NeumannBoundaryIsZero) {
  std::mt19937_64 rng(2);
  const GradientField g = forward_diff(random_plane(6, 9, rng));
  for (std::size_t r = 0; r < 6; ++r) EXPECT_EQ(g.gx(r, 8), 0.0);
  for (std::size_t c = 0; c < 9; ++c) EXPECT_EQ(g.gy(5, c), 0.0);
}

TEST(NegDivergenceTest, Examples) {
  const Plane zero = neg_divergence({Plane(3, 3, 1), Plane(3, 3, 1)});
  EXPECT_EQ(max_abs(zero), 0.0);

  const Plane out = neg_divergence({plane_from({{1, 0}, {0, 0}}), Plane(2, 2, 1)});
  EXPECT_EQ(out, plane_from({{-1, 1}, {0, 0}}));
}

TEST(NegDivergenceTest, ShapeMismatch) {
  EXPECT_THROW(neg_divergence({Plane(3, 3, 1), Plane(3, 4, 1)}), ShapeError);
}

TEST(NegDivergenceTest, AdjointOfForwardDiff) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 2 + rng() % 31;
    const std::size_t cols = 2 + rng() % 31;
    const Plane u = random_plane(rows, cols, rng);
    GradientField g{random_plane(rows, cols, rng), random_plane(rows, cols, rng)};
    // Only fields in the range of forward_diff are meaningful on the left side.
    for (std::size_t r = 0; r < rows; ++r) g.gx(r, cols - 1) = 0.0;
    for (std::size_t c = 0; c < cols; ++c) g.gy(rows - 1, c) = 0.0;
    const GradientField du = forward_diff(u);
    const double lhs = inner(du.gx, g.gx) + inner(du.gy, g.gy);
    const double rhs = inner(u, neg_divergence(g));
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(DctTest, ConstantIsDcOnly) {
  const Plane u(4, 6, 1, 2.5);
  const SpectralField rho = dct2(u);
  EXPECT_NEAR(rho.coeffs(0, 0), 2.5 * std::sqrt(24.0), 1e-12);
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t n = 0; n < 6; ++n)
      if (m != 0 || n != 0) EXPECT_NEAR(rho.coeffs(m, n), 0.0, 1e-12);
}

TEST(DctTest, MatchesDirectTransform) {
  std::mt19937_64 rng(31);
  for (auto [rows, cols] : {std::pair{8, 8}, {5, 7}, {2, 2}, {16, 3}, {13, 11}}) {
    const Plane u = random_plane(rows, cols, rng);
    EXPECT_LE(max_abs_diff(dct2(u).coeffs, testing::direct_dct2(u)), 1e-12);
  }
}

TEST(DctTest, RoundTripAndParseval) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 2 + rng() % 40;
    const std::size_t cols = 2 + rng() % 40;
    const Plane u = random_plane(rows, cols, rng);
    const SpectralField rho = dct2(u);
    EXPECT_LE(max_abs_diff(idct2(rho), u), 1e-12);
    EXPECT_NEAR(inner(u, u), inner(rho.coeffs, rho.coeffs), 1e-10 * inner(u, u));
  }
}

TEST(HardThresholdTest, Examples) {
  const SpectralField rho{plane_from({{5, -3, 1}, {0, 2, -2.5}})};
  const SpectralField t = hard_threshold(rho, 2.0);
  EXPECT_EQ(t.coeffs, plane_from({{5, -3, 0}, {0, 0, -2.5}}));
  EXPECT_EQ(hard_threshold(rho, 0.0).coeffs, rho.coeffs);
  EXPECT_EQ(max_abs(hard_threshold(rho, std::numeric_limits<double>::infinity()).coeffs), 0.0);
  EXPECT_THROW(hard_threshold(rho, -1.0), InvalidParam);
}

TEST(PoissonSolveTest, DenominatorClosedForm) {
  EXPECT_NEAR(laplacian_eigenvalue(1, 0, 4, 4), 2.0 * (2.0 - std::cos(M_PI / 4.0) - 1.0), 1e-15);
  EXPECT_NEAR(laplacian_eigenvalue(1, 0, 4, 4), 0.58579, 1e-5);
  EXPECT_EQ(laplacian_eigenvalue(0, 0, 5, 7), 0.0);
}

TEST(PoissonSolveTest, ZeroInZeroOut) {
  EXPECT_EQ(max_abs(poisson_solve(SpectralField{Plane(5, 4, 1)})), 0.0);
}

TEST(PoissonSolveTest, InvertsLaplacianOnZeroMeanImages) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 2 + rng() % 40;
    const std::size_t cols = 2 + rng() % 40;
    Plane u = random_plane(rows, cols, rng);
    const double mu = mean(u);
    for (double& v : u.values()) v -= mu;
    const Plane back = poisson_solve(dct2(neg_divergence(forward_diff(u))));
    EXPECT_LE(max_abs_diff(back, u), 1e-8);
  }
}

TEST(PoissonSolveTest, OutputHasZeroMean) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const Plane rho = random_plane(2 + rng() % 30, 2 + rng() % 30, rng);
    EXPECT_LE(std::abs(mean(poisson_solve(SpectralField{rho}))), 1e-9 * 256.0);
  }
}

TEST(EigenIdentityTest, StencilLaplacianIsDiagonalInDct) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 2 + rng() % 30;
    const std::size_t cols = 2 + rng() % 30;
    const Plane u = random_plane(rows, cols, rng);
    // Independent route: explicit stencil and direct DCT.
    const Plane lhs = testing::direct_dct2(testing::stencil_laplacian(u));
    const Plane via_ops = dct2(neg_divergence(forward_diff(u))).coeffs;
    const Plane rho = testing::direct_dct2(u);
    const double scale = std::max(1.0, max_abs(lhs));
    for (std::size_t m = 0; m < rows; ++m)
      for (std::size_t n = 0; n < cols; ++n) {
        const double expected = laplacian_eigenvalue(m, n, rows, cols) * rho(m, n);
        EXPECT_LE(std::abs(lhs(m, n) - expected), 1e-10 * scale);
        EXPECT_LE(std::abs(via_ops(m, n) - expected), 1e-10 * scale);
      }
  }
}

TEST(WrappedGradientTest, MatchesTrueGradientUnderItoh) {
  std::mt19937_64 rng(53);
  const SensorConfig cfg(8);
  for (int trial = 0; trial < 40; ++trial) {
    const Image<double> x = testing::smooth_latent(16 + rng() % 32, 16 + rng() % 32, rng, 3000.0, 127.0);
    Image<double> q = x;
    for (double& v : q.values()) v = std::floor(v);
    ASSERT_TRUE(itoh_check(q, cfg).holds);
    const GradientField truth = forward_diff(q);
    GradientField wrapped = forward_diff(to_real(codes_from(x, cfg).codes()));
    for (double& v : wrapped.gx.values()) v = centered_modulo(v, cfg);
    for (double& v : wrapped.gy.values()) v = centered_modulo(v, cfg);
    EXPECT_EQ(wrapped.gx, truth.gx);
    EXPECT_EQ(wrapped.gy, truth.gy);
  }
}

TEST(OracleTest, UnwrapsRowOfSteps) {
  const SensorConfig cfg(8);
  Image<double> x(2, 5, 1);
  for (std::size_t c = 0; c < 5; ++c) x(0, c) = x(1, c) = 100.0 * static_cast<double>(c);
  const HdrImage out = sequential_unwrap_oracle(codes_from(x, cfg), cfg);
  EXPECT_EQ(out.data(), x);
}

TEST(OracleTest, ConstantStaysConstant) {
  const SensorConfig cfg(8);
  const HdrImage out = sequential_unwrap_oracle(codes_from(Image<double>(4, 4, 1, 5.0), cfg), cfg);
  for (double v : out.data().values()) EXPECT_EQ(v, 5.0);
}

TEST(OracleTest, ExactOnSmoothIntegerLatents) {
  std::mt19937_64 rng(59);
  const SensorConfig cfg(8);
  for (int trial = 0; trial < 30; ++trial) {
    const double base = static_cast<double>(rng() % 256);
    const Image<double> x = testing::smooth_integer_latent(16, 16, rng, 900.0, 127.0, base);
    const HdrImage out = sequential_unwrap_oracle(codes_from(x, cfg), cfg);
    EXPECT_EQ(out.data(), x);
  }
}

TEST(SpudReconstructTest, RecoversWrappedRamp) {
  const SensorConfig cfg(8);
  Image<double> ramp(24, 40, 1);
  for (std::size_t r = 0; r < 24; ++r)
    for (std::size_t c = 0; c < 40; ++c) ramp(r, c) = 30.0 * static_cast<double>(c) + 11.0 * static_cast<double>(r);
  const ModuloImage y = codes_from(ramp, cfg);
  const HdrImage x = spud_reconstruct(y, cfg);
  EXPECT_LE(aligned_max_error(x.data(), sequential_unwrap_oracle(y, cfg).data()), 1e-6);
  EXPECT_LE(aligned_max_error(x.data(), ramp), 1e-6);
  // Min of the ramp is 0 < 2^b, so the anchored result is the ramp itself.
  EXPECT_LE(max_abs_diff(x.data(), ramp), 1e-6);
}

TEST(SpudReconstructTest, ConstantInputGivesConstantOutput) {
  const SensorConfig cfg(8);
  const HdrImage x = spud_reconstruct(codes_from(Image<double>(6, 9, 3, 77.0), cfg), cfg);
  for (double v : x.data().values()) EXPECT_NEAR(v, 77.0, 1e-9);
}

TEST(SpudReconstructTest, BitDepthMismatch) {
  const ModuloImage y = codes_from(Image<double>(4, 4, 1, 3.0), SensorConfig(8));
  EXPECT_THROW(spud_reconstruct(y, SensorConfig(10)), ConfigError);
  EXPECT_THROW(spud_reconstruct(y, SensorConfig(8), {-1.0, AnchorPolicy::ZeroMin}), InvalidParam);
}

TEST(SpudReconstructTest, AnchorPolicies) {
  std::mt19937_64 rng(61);
  const SensorConfig cfg(8);
  const Image<double> x = testing::smooth_latent(20, 30, rng, 1500.0, 120.0, 700.0);
  const ModuloImage y = codes_from(x, cfg);

  const HdrImage zero_min = spud_reconstruct(y, cfg, {0.0, AnchorPolicy::ZeroMin});
  EXPECT_NEAR(*std::min_element(zero_min.data().values().begin(), zero_min.data().values().end()), 0.0, 1e-9);

  const HdrImage first = spud_reconstruct(y, cfg, {0.0, AnchorPolicy::MatchFirstPixel});
  const double low = *std::min_element(first.data().values().begin(), first.data().values().end());
  EXPECT_GE(low, 0.0);
  EXPECT_LT(low, cfg.period());
  const double residue = std::fmod(first(0, 0) - y.codes()(0, 0), cfg.period());
  EXPECT_TRUE(std::abs(residue) < 1e-6 || std::abs(std::abs(residue) - cfg.period()) < 1e-6);
}

TEST(SpudReconstructTest, ColorChannelsAreIndependent) {
  std::mt19937_64 rng(67);
  const SensorConfig cfg(8);
  const Image<double> x = testing::smooth_latent(18, 22, rng, 1200.0, 120.0, 0.0, 3);
  const ModuloImage y = codes_from(x, cfg);
  const HdrImage rec = spud_reconstruct(y, cfg);
  const HdrImage oracle = sequential_unwrap_oracle(y, cfg);
  for (std::size_t ch = 0; ch < 3; ++ch)
    EXPECT_LE(aligned_max_error(extract_channel(rec.data(), ch), extract_channel(oracle.data(), ch)), 1e-6);
}

TEST(SpudReconstructTest, MatchesOracleOnRandomItohLatents) {
  std::mt19937_64 rng(71);
  const SensorConfig cfg(8);
  for (int trial = 0; trial < 25; ++trial) {
    const Image<double> x = testing::smooth_latent(16 + rng() % 48, 16 + rng() % 48, rng, 4000.0, 127.0,
                                                   static_cast<double>(rng() % 1000));
    const ModuloImage y = codes_from(x, cfg);
    EXPECT_LE(aligned_max_error(spud_reconstruct(y, cfg).data(), sequential_unwrap_oracle(y, cfg).data()),
              1e-6);
  }
}

TEST(SpudReconstructTest, AgreesWithOperatorComposition) {
  // The solver runs a fused kernel; it must equal the composition of the
  // public operators, including thresholding and on arbitrary (non-Itoh) codes.
  std::mt19937_64 rng(83);
  for (int bits : {3, 8, 10}) {
    const SensorConfig cfg(bits);
    for (std::size_t channels : {1u, 3u}) {
      Image<std::uint16_t> codes(17 + rng() % 20, 9 + rng() % 30, channels);
      for (auto& v : codes.values()) v = static_cast<std::uint16_t>(rng() % cfg.wrap_period());
      for (double tau : {0.0, 3.0}) {
        const HdrImage fused = spud_reconstruct(ModuloImage(codes, cfg), cfg, {tau, AnchorPolicy::ZeroMin});
        for (std::size_t ch = 0; ch < channels; ++ch) {
          Plane ref = spud_unwrap_plane(extract_channel(to_real(codes), ch), cfg, tau);
          const double lowest = *std::min_element(ref.values().begin(), ref.values().end());
          for (double& v : ref.values()) v -= lowest;
          EXPECT_LE(max_abs_diff(extract_channel(fused.data(), ch), ref), 1e-9) << bits << " " << tau;
        }
      }
    }
  }
}

TEST(SpudReconstructTest, HugeThresholdFlattensImage) {
  std::mt19937_64 rng(73);
  const SensorConfig cfg(8);
  const ModuloImage y = codes_from(testing::smooth_latent(12, 12, rng, 600.0, 100.0), cfg);
  const HdrImage x = spud_reconstruct(y, cfg, {std::numeric_limits<double>::infinity(), AnchorPolicy::ZeroMin});
  EXPECT_LE(max_abs(x.data()), 1e-12);
}

TEST(SpudReconstructTest, ThresholdSuppressesSpectralNoise) {
  // A few DCT modes are eigenfunctions of the Laplacian, so the clean signal
  // occupies a handful of large coefficients; code noise spreads thinly over
  // all of them (sigma ~ 6 here) and a threshold between the two removes it.
  const std::size_t n = 64;
  const SensorConfig cfg(8);
  Image<double> latent(n, n, 1);
  const int modes[][2] = {{1, 2}, {3, 1}, {2, 4}};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      double v = 1000.0;
      for (const auto& m : modes)
        v += 200.0 * std::cos(std::numbers::pi * m[0] * (r + 0.5) / n) *
             std::cos(std::numbers::pi * m[1] * (c + 0.5) / n);
      latent(r, c) = v;
    }
  ASSERT_TRUE(itoh_check(latent, cfg).holds);
  const ModuloImage clean = codes_from(latent, cfg);
  std::mt19937_64 rng(79);
  Image<std::uint16_t> noisy_codes = clean.codes();
  std::uniform_int_distribution<int> coin(-2, 2);
  for (auto& v : noisy_codes.values()) v = static_cast<std::uint16_t>((v + 256 + coin(rng)) % 256);
  const ModuloImage noisy(noisy_codes, cfg);

  auto error = [&](double tau) {
    const HdrImage rec = spud_reconstruct(noisy, cfg, {tau, AnchorPolicy::ZeroMin});
    return aligned_rms(rec.data(), latent);
  };
  const double raw = error(0.0);
  EXPECT_GT(raw, 0.5);
  EXPECT_LT(error(30.0), 0.5 * raw);
}

}  // namespace
}  // namespace hdrmod
