#pragma once

// Sensor forward models: modulo (wrapping) acquisition and conventional
// saturating acquisition over a simulated HDR irradiance field.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdrmod/image.hpp"

namespace hdrmod {

/// Quantizer bit depth b and the derived wrap period 2^b.
class SensorConfig {
 public:
  explicit SensorConfig(int bit_depth = 8);

  int bit_depth() const noexcept { return bit_depth_; }
  std::uint32_t wrap_period() const noexcept { return std::uint32_t{1} << bit_depth_; }
  std::uint32_t max_code() const noexcept { return wrap_period() - 1; }
  double period() const noexcept { return static_cast<double>(wrap_period()); }
  double half_period() const noexcept { return period() / 2.0; }

  bool operator==(const SensorConfig&) const = default;

 private:
  int bit_depth_;
};

enum class Mode { Saturated, Modulo, Recovery, IdealHDR };

std::string_view to_string(Mode mode) noexcept;
/// Accepts "saturated", "modulo", "recovery", "ideal_hdr" (also "idealhdr", "hdr").
std::optional<Mode> parse_mode(std::string_view text);
const std::vector<Mode>& all_modes();

struct ScenarioConfig {
  double alpha = 1.0;
  double tau = 0.0;
  Mode mode = Mode::Modulo;
  /// true: detection consumes the recovered image; false: the raw modulo image.
  bool use_recovered = false;

  void validate() const;
};

/// Real irradiance field, finite and >= 0, at least 2x2, 1 or 3 channels.
class HdrImage {
 public:
  explicit HdrImage(Image<double> data);

  const Image<double>& data() const noexcept { return data_; }
  std::size_t height() const noexcept { return data_.height(); }
  std::size_t width() const noexcept { return data_.width(); }
  std::size_t channels() const noexcept { return data_.channels(); }
  double operator()(std::size_t r, std::size_t c, std::size_t ch = 0) const { return data_(r, c, ch); }

 private:
  Image<double> data_;
};

/// Integer codes in [0, 2^b - 1].
class ModuloImage {
 public:
  ModuloImage(Image<std::uint16_t> codes, SensorConfig cfg);

  const Image<std::uint16_t>& codes() const noexcept { return codes_; }
  const SensorConfig& config() const noexcept { return cfg_; }
  int bit_depth() const noexcept { return cfg_.bit_depth(); }

 private:
  Image<std::uint16_t> codes_;
  SensorConfig cfg_;
};

/// Clipped integer codes in [0, 2^b - 1]; the top code marks saturation.
class SaturatedImage {
 public:
  SaturatedImage(Image<std::uint16_t> codes, SensorConfig cfg);

  const Image<std::uint16_t>& codes() const noexcept { return codes_; }
  const SensorConfig& config() const noexcept { return cfg_; }
  int bit_depth() const noexcept { return cfg_.bit_depth(); }
  /// 1 where the sample sits at the code ceiling.
  Image<std::uint8_t> saturated_mask() const;

 private:
  Image<std::uint16_t> codes_;
  SensorConfig cfg_;
};

struct ItohResult {
  bool holds = true;
  double max_abs_diff = 0.0;
};

/// Min-max map of `raw` onto [0, 2^b]; one min/max shared by all channels.
/// Constant input maps to zeros.
HdrImage normalize_hdr(const Image<double>& raw, const SensorConfig& cfg);

HdrImage apply_gain(const HdrImage& x, double alpha);

/// y = floor(x) mod 2^b.
ModuloImage wrap_modulo(const HdrImage& x, const SensorConfig& cfg);

/// floor(min(x, 2^b)) clipped to the code ceiling 2^b - 1.
SaturatedImage clamp_saturate(const HdrImage& x, const SensorConfig& cfg);

/// Largest absolute horizontal/vertical forward difference against 2^{b-1}.
ItohResult itoh_check(const HdrImage& x, const SensorConfig& cfg);
ItohResult itoh_check(const Image<double>& x, const SensorConfig& cfg);

}  // namespace hdrmod
