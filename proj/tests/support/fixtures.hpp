#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hdrmod/detection.hpp"
#include "hdrmod/image.hpp"

namespace hdrmod::testing {

Image<double> random_image(std::size_t rows, std::size_t cols, std::size_t channels,
                           std::mt19937_64& rng, double lo = -1.0, double hi = 1.0);

/// Smooth latent built from a few random cosines, with minimum `base`. The
/// largest forward difference of floor(latent) stays strictly below
/// `max_step`; the value range is at most `peak` (it spans several wrap
/// periods when the image is large enough).
Image<double> smooth_latent(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                            double peak, double max_step, double base = 0.0,
                            std::size_t channels = 1);

/// Integer-valued variant: every forward difference is strictly below
/// `max_step` and the minimum is exactly `base`.
Image<double> smooth_integer_latent(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                    double peak, double max_step, double base);

struct FixtureDataset {
  std::filesystem::path images;
  std::filesystem::path labels;
  std::vector<std::string> ids;
  std::vector<DetectionSet> truth;
};

/// Synthetic street-like RGB scenes (sky gradient, bright sun, road, boxy
/// "vehicles") with KITTI-format labels. Fully determined by `seed`.
FixtureDataset make_fixture_dataset(const std::filesystem::path& root, std::size_t count,
                                    std::size_t width, std::size_t height, std::uint64_t seed);

/// Detector stand-in: jitters each truth box, drops some, adds clutter.
/// Degradation grows with `difficulty` in [0, 1].
DetectionSet fake_detections(const DetectionSet& truth, double difficulty, std::mt19937_64& rng);

/// Writes <root>/<variant>/<mode>/alpha_<a>.json and ideal_hdr.json for every
/// cell, with difficulty depending on mode and alpha.
void write_fake_detections(const std::filesystem::path& root, const std::string& variant,
                           const FixtureDataset& data, const std::vector<double>& alphas,
                           std::uint64_t seed);

std::filesystem::path scratch_dir(const std::string& name);

}  // namespace hdrmod::testing
