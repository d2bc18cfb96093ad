#pragma once

// Non-iterative HDR recovery from modulo measurements: wrapped forward
// differences, a Neumann Poisson solve diagonalized by the DCT-II, and hard
// thresholding of the spectral coefficients for denoising.

#include <cstddef>

#include "hdrmod/image.hpp"
#include "hdrmod/sensor.hpp"

namespace hdrmod {

/// Forward differences with a replicate (Neumann) boundary:
/// gx(r, N-1) == 0 and gy(M-1, c) == 0.
struct GradientField {
  Plane gx;
  Plane gy;
};

/// Orthonormal 2-D DCT-II coefficients, indexed (m, n) with m along rows.
struct SpectralField {
  Plane coeffs;

  std::size_t rows() const noexcept { return coeffs.height(); }
  std::size_t cols() const noexcept { return coeffs.width(); }
};

enum class AnchorPolicy {
  /// x(0,0) congruent to y(0,0) mod 2^b, shifted by the smallest multiple of
  /// 2^b that makes the image nonnegative.
  MatchFirstPixel,
  /// Shift so the minimum is 0.
  ZeroMin,
};

struct RecoveryParams {
  double tau = 0.0;
  AnchorPolicy anchor = AnchorPolicy::MatchFirstPixel;
};

/// W_b(d + 2^{b-1}) - 2^{b-1}: the representative of d mod 2^b in
/// [-2^{b-1}, 2^{b-1}).
double centered_modulo(double d, const SensorConfig& cfg);

GradientField forward_diff(const Plane& u);

/// Adjoint of forward_diff, i.e. the negative divergence.
Plane neg_divergence(const GradientField& g);

SpectralField dct2(const Plane& u);
Plane idct2(const SpectralField& rho);

/// Keeps coefficients with |rho| > tau, zeroes the rest.
SpectralField hard_threshold(const SpectralField& rho, double tau);

/// Eigenvalue of the Neumann Laplacian (forward-difference normal operator)
/// for DCT mode (m, n) on an rows x cols grid: 2(2 - cos(pi m/M) - cos(pi n/N)).
double laplacian_eigenvalue(std::size_t m, std::size_t n, std::size_t rows, std::size_t cols);

/// Divides by the Laplacian eigenvalues, zeroes the DC term and inverts the DCT.
Plane poisson_solve(const SpectralField& rho);

/// Single-channel recovery up to a global constant (zero mean); no anchoring.
Plane spud_unwrap_plane(const Plane& codes, const SensorConfig& cfg, double tau);

HdrImage spud_reconstruct(const ModuloImage& y, const SensorConfig& cfg,
                          const RecoveryParams& params = {});

/// Row-by-row Itoh unwrapping in integer arithmetic, used to check the solver.
/// Exact when the latent image satisfies Itoh's condition.
HdrImage sequential_unwrap_oracle(const ModuloImage& y, const SensorConfig& cfg);

}  // namespace hdrmod
