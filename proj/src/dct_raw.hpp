#pragma once

// Unnormalized FFTW transforms shared by the public DCT and the fused solver.

#include <cstddef>
#include <vector>

namespace hdrmod::detail {

/// FFTW REDFT10 in both dimensions (row-major, out-of-place).
void redft10_2d(std::size_t rows, std::size_t cols, const double* in, double* out);
/// FFTW REDFT01 in both dimensions (row-major, out-of-place).
void redft01_2d(std::size_t rows, std::size_t cols, const double* in, double* out);

/// Orthonormal DCT-II scale factors: sqrt(1/n) for k = 0, sqrt(2/n) otherwise.
std::vector<double> ortho_weights(std::size_t n);

}  // namespace hdrmod::detail
