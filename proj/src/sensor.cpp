#include "hdrmod/sensor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace hdrmod {

namespace {

void require_nonnegative(const HdrImage& x) {
  for (double v : x.data().values())
    if (v < 0.0) throw InvalidImage("negative irradiance in sensor input");
}

void check_codes(const Image<std::uint16_t>& codes, const SensorConfig& cfg) {
  if (codes.height() < 2 || codes.width() < 2) throw InvalidImage("image must be at least 2x2");
  if (codes.channels() != 1 && codes.channels() != 3)
    throw InvalidImage("image must have 1 or 3 channels");
  const auto top = cfg.max_code();
  for (auto v : codes.values())
    if (v > top) throw InvalidImage("code exceeds 2^b - 1");
}

}  // namespace

SensorConfig::SensorConfig(int bit_depth) : bit_depth_(bit_depth) {
  if (bit_depth < 1 || bit_depth > 16) throw ConfigError("bit depth must be in [1, 16]");
}

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::Saturated: return "saturated";
    case Mode::Modulo: return "modulo";
    case Mode::Recovery: return "recovery";
    case Mode::IdealHDR: return "ideal_hdr";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "saturated") return Mode::Saturated;
  if (lower == "modulo") return Mode::Modulo;
  if (lower == "recovery") return Mode::Recovery;
  if (lower == "ideal_hdr" || lower == "idealhdr" || lower == "hdr") return Mode::IdealHDR;
  return std::nullopt;
}

const std::vector<Mode>& all_modes() {
  static const std::vector<Mode> modes{Mode::Saturated, Mode::Modulo, Mode::Recovery,
                                       Mode::IdealHDR};
  return modes;
}

void ScenarioConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidGain("alpha must be positive");
  if (!(tau >= 0.0)) throw InvalidParam("tau must be nonnegative");
}

HdrImage::HdrImage(Image<double> data) : data_(std::move(data)) {
  if (data_.height() < 2 || data_.width() < 2) throw InvalidImage("image must be at least 2x2");
  if (data_.channels() != 1 && data_.channels() != 3)
    throw InvalidImage("image must have 1 or 3 channels");
  for (double v : data_.values())
    if (!std::isfinite(v) || v < 0.0) throw InvalidImage("irradiance must be finite and >= 0");
}

ModuloImage::ModuloImage(Image<std::uint16_t> codes, SensorConfig cfg)
    : codes_(std::move(codes)), cfg_(cfg) {
  check_codes(codes_, cfg_);
}

SaturatedImage::SaturatedImage(Image<std::uint16_t> codes, SensorConfig cfg)
    : codes_(std::move(codes)), cfg_(cfg) {
  check_codes(codes_, cfg_);
}

Image<std::uint8_t> SaturatedImage::saturated_mask() const {
  Image<std::uint8_t> mask(codes_.height(), codes_.width(), codes_.channels());
  auto src = codes_.values();
  auto dst = mask.values();
  const auto top = cfg_.max_code();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == top ? 1 : 0;
  return mask;
}

HdrImage normalize_hdr(const Image<double>& raw, const SensorConfig& cfg) {
  if (raw.empty()) throw InvalidImage("empty image");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : raw.values()) {
    if (!std::isfinite(v)) throw InvalidImage("non-finite value in raw image");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Image<double> out(raw.height(), raw.width(), raw.channels(), 0.0);
  if (hi > lo) {
    const double scale = cfg.period() / (hi - lo);
    auto src = raw.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
      // Pin the maximum so the upper end is exactly 2^b.
      dst[i] = src[i] == hi ? cfg.period() : (src[i] - lo) * scale;
    }
  }
  return HdrImage(std::move(out));
}

HdrImage apply_gain(const HdrImage& x, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidGain("gain must be positive and finite");
  Image<double> out = x.data();
  for (double& v : out.values()) v *= alpha;
  return HdrImage(std::move(out));
}

ModuloImage wrap_modulo(const HdrImage& x, const SensorConfig& cfg) {
  require_nonnegative(x);
  const auto& src = x.data();
  Image<std::uint16_t> codes(src.height(), src.width(), src.channels());
  const double period = cfg.period();
  auto in = src.values();
  auto out = codes.values();
  for (std::size_t i = 0; i < in.size(); ++i) {
    // fmod is exact, and floor(x) mod P == floor(x mod P) for integer P.
    const double wrapped = std::fmod(std::floor(in[i]), period);
    out[i] = static_cast<std::uint16_t>(std::clamp(wrapped, 0.0, period - 1.0));
  }
  return ModuloImage(std::move(codes), cfg);
}

SaturatedImage clamp_saturate(const HdrImage& x, const SensorConfig& cfg) {
  require_nonnegative(x);
  const auto& src = x.data();
  Image<std::uint16_t> codes(src.height(), src.width(), src.channels());
  const double period = cfg.period();
  auto in = src.values();
  auto out = codes.values();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double clipped = std::floor(std::min(in[i], period));
    out[i] = static_cast<std::uint16_t>(std::min(clipped, period - 1.0));
  }
  return SaturatedImage(std::move(codes), cfg);
}

ItohResult itoh_check(const Image<double>& x, const SensorConfig& cfg) {
  double worst = 0.0;
  for (std::size_t r = 0; r < x.height(); ++r) {
    for (std::size_t c = 0; c < x.width(); ++c) {
      for (std::size_t ch = 0; ch < x.channels(); ++ch) {
        if (c + 1 < x.width()) worst = std::max(worst, std::abs(x(r, c + 1, ch) - x(r, c, ch)));
        if (r + 1 < x.height()) worst = std::max(worst, std::abs(x(r + 1, c, ch) - x(r, c, ch)));
      }
    }
  }
  return {worst < cfg.half_period(), worst};
}

ItohResult itoh_check(const HdrImage& x, const SensorConfig& cfg) { return itoh_check(x.data(), cfg); }

}  // namespace hdrmod
