#pragma once

#include <cstdint>
#include <filesystem>

#include "hdrmod/image.hpp"

namespace hdrmod {

/// Decoded 8-bit PNG samples (gray or RGB; alpha composited, palette expanded).
struct PngImage {
  Image<std::uint16_t> samples;
  int bit_depth = 8;
};

PngImage read_png(const std::filesystem::path& path);

/// Writes an 8-bit gray or RGB PNG. Encoder settings are fixed, so equal
/// inputs always produce equal bytes.
void write_png(const std::filesystem::path& path, const Image<std::uint8_t>& image);

/// Little-endian PFM ("Pf" gray / "PF" RGB, scale -1.0), bottom row first.
void write_pfm(const std::filesystem::path& path, const Image<double>& image);
Image<double> read_pfm(const std::filesystem::path& path);

}  // namespace hdrmod
