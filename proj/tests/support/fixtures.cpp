#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hdrmod/image_io.hpp"
#include "hdrmod/pipeline.hpp"

namespace hdrmod::testing {

namespace fs = std::filesystem;

Image<double> random_image(std::size_t rows, std::size_t cols, std::size_t channels,
                           std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Image<double> out(rows, cols, channels);
  for (double& v : out.values()) v = dist(rng);
  return out;
}

namespace {

Plane cosine_field(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Plane g(rows, cols, 1);
  const int terms = 2 + static_cast<int>(rng() % 4);
  for (int t = 0; t < terms; ++t) {
    const double amp = 0.2 + unit(rng);
    const double fr = unit(rng) * 2.0;
    const double fc = unit(rng) * 2.0;
    const double phase = unit(rng) * two_pi;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        g(r, c) += amp * std::cos(two_pi * (fr * static_cast<double>(r) / static_cast<double>(rows) +
                                            fc * static_cast<double>(c) / static_cast<double>(cols)) +
                                  phase);
  }
  // Linear ramp so the field is never constant.
  const double tilt = unit(rng) + 0.1;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      g(r, c) += tilt * (static_cast<double>(r) / rows + static_cast<double>(c) / cols);
  return g;
}

double max_step_of(const Plane& g) {
  double d = 0.0;
  for (std::size_t r = 0; r < g.height(); ++r)
    for (std::size_t c = 0; c < g.width(); ++c) {
      if (c + 1 < g.width()) d = std::max(d, std::abs(g(r, c + 1) - g(r, c)));
      if (r + 1 < g.height()) d = std::max(d, std::abs(g(r + 1, c) - g(r, c)));
    }
  return d;
}

}  // namespace

Image<double> smooth_latent(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double peak,
                            double max_step, double base, std::size_t channels) {
  Image<double> out(rows, cols, channels);
  for (std::size_t ch = 0; ch < channels; ++ch) {
    Plane g = cosine_field(rows, cols, rng);
    const auto [lo, hi] = std::minmax_element(g.values().begin(), g.values().end());
    const double low = *lo;
    const double range = *hi - low;
    // Leave one code of headroom for the floor quantizer.
    const double scale = std::min((max_step - 1.0) / max_step_of(g), peak / range);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) out(r, c, ch) = base + (g(r, c) - low) * scale;
  }
  return out;
}

Image<double> smooth_integer_latent(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                    double peak, double max_step, double base) {
  Image<double> x = smooth_latent(rows, cols, rng, peak, max_step - 1.0, 0.0, 1);
  for (double& v : x.values()) v = std::round(v);
  const double low = *std::min_element(x.values().begin(), x.values().end());
  for (double& v : x.values()) v = v - low + base;
  return x;
}

namespace {

struct Rgb {
  double r, g, b;
};

void fill_rect(Image<double>& img, double j1, double k1, double j2, double k2, Rgb color,
               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> jitter(-6.0, 6.0);
  for (std::size_t k = static_cast<std::size_t>(k1); k < static_cast<std::size_t>(k2); ++k)
    for (std::size_t j = static_cast<std::size_t>(j1); j < static_cast<std::size_t>(j2); ++j) {
      const double shade = jitter(rng);
      img(k, j, 0) = color.r + shade;
      img(k, j, 1) = color.g + shade;
      img(k, j, 2) = color.b + shade;
    }
}

}  // namespace

FixtureDataset make_fixture_dataset(const fs::path& root, std::size_t count, std::size_t width,
                                    std::size_t height, std::uint64_t seed) {
  FixtureDataset data{root / "images", root / "labels", {}, {}};
  fs::create_directories(data.images);
  fs::create_directories(data.labels);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  const double horizon = 0.45 * h;

  for (std::size_t n = 0; n < count; ++n) {
    Image<double> img(height, width, 3);
    const double sun_j = unit(rng) * w;
    const double sun_k = unit(rng) * horizon;
    const double sun_radius = (0.1 + 0.15 * unit(rng)) * h;
    const double sky_top = 120.0 + 60.0 * unit(rng);
    for (std::size_t k = 0; k < height; ++k)
      for (std::size_t j = 0; j < width; ++j) {
        const double kk = static_cast<double>(k);
        const double jj = static_cast<double>(j);
        double lum;
        if (kk < horizon) {
          const double d2 = (jj - sun_j) * (jj - sun_j) + (kk - sun_k) * (kk - sun_k);
          lum = sky_top + 40.0 * kk / horizon + 120.0 * std::exp(-d2 / (2.0 * sun_radius * sun_radius));
        } else {
          lum = 70.0 + 50.0 * (kk - horizon) / (h - horizon) +
                8.0 * std::sin(0.3 * jj + 0.2 * kk);
        }
        img(k, j, 0) = lum;
        img(k, j, 1) = lum * 0.97;
        img(k, j, 2) = lum * (kk < horizon ? 1.05 : 0.92);
      }

    DetectionSet truth;
    std::ostringstream label;
    const int objects = 1 + static_cast<int>(rng() % 4);
    static const char* kClasses[] = {"Car", "Car", "Van", "Pedestrian", "Cyclist"};
    for (int o = 0; o < objects; ++o) {
      const char* cls = kClasses[rng() % 5];
      const bool person = std::string(cls) == "Pedestrian" || std::string(cls) == "Cyclist";
      const double bw = (person ? 0.05 : 0.12 + 0.1 * unit(rng)) * w;
      const double bh = (person ? 0.3 : 0.2 + 0.1 * unit(rng)) * h;
      const double j1 = std::floor(unit(rng) * (w - bw - 1.0));
      const double k1 = std::floor(horizon - 0.3 * bh + unit(rng) * (h - horizon - 0.7 * bh - 1.0));
      const double j2 = j1 + std::floor(bw);
      const double k2 = std::min(h - 1.0, k1 + std::floor(bh));
      const Rgb color{40.0 + 180.0 * unit(rng), 40.0 + 150.0 * unit(rng), 40.0 + 150.0 * unit(rng)};
      fill_rect(img, j1, k1, j2, k2, color, rng);
      label << cls << " 0.00 0 -1.50 " << j1 << ".00 " << k1 << ".00 " << j2 << ".00 " << k2
            << ".00 1.50 1.60 3.70 -0.60 1.70 40.00 -1.55\n";
    }
    if (rng() % 3 == 0) {
      const double j1 = std::floor(unit(rng) * (w - 20.0));
      label << "DontCare -1 -1 -10 " << j1 << ".00 " << std::floor(horizon) << ".00 " << j1 + 12.0
            << ".00 " << std::floor(horizon) + 6.0 << ".00 -1 -1 -1 -1000 -1000 -1000 -10\n";
    }

    Image<std::uint8_t> png(height, width, 3);
    for (std::size_t i = 0; i < png.size(); ++i)
      png.values()[i] = static_cast<std::uint8_t>(std::clamp(std::round(img.values()[i]), 0.0, 255.0));

    char name[32];
    std::snprintf(name, sizeof name, "%06zu", n);
    write_png(data.images / (std::string(name) + ".png"), png);
    std::ofstream(data.labels / (std::string(name) + ".txt")) << label.str();
    data.ids.emplace_back(name);
    data.truth.push_back(parse_kitti_labels(label.str(), name));
  }
  return data;
}

DetectionSet fake_detections(const DetectionSet& truth, double difficulty, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 1.0 + 6.0 * difficulty);
  DetectionSet out{truth.image_id, {}};
  for (const auto& t : truth.boxes) {
    if (t.excluded || unit(rng) < 0.8 * difficulty) continue;
    BoundingBox b = t;
    b.j1 = std::max(0.0, b.j1 + jitter(rng));
    b.k1 = std::max(0.0, b.k1 + jitter(rng));
    b.j2 = std::max(b.j1 + 1.0, b.j2 + jitter(rng));
    b.k2 = std::max(b.k1 + 1.0, b.k2 + jitter(rng));
    b.score = 0.5 + 0.5 * unit(rng);
    out.boxes.push_back(b);
  }
  const int clutter = unit(rng) < difficulty ? 1 + static_cast<int>(rng() % 2) : 0;
  for (int i = 0; i < clutter; ++i) {
    BoundingBox b;
    b.j1 = 300.0 * unit(rng);
    b.k1 = 80.0 * unit(rng);
    b.j2 = b.j1 + 5.0 + 20.0 * unit(rng);
    b.k2 = b.k1 + 5.0 + 20.0 * unit(rng);
    b.cls = "car";
    b.score = 0.3 + 0.3 * unit(rng);
    out.boxes.push_back(b);
  }
  return out;
}

void write_fake_detections(const fs::path& root, const std::string& variant,
                           const FixtureDataset& data, const std::vector<double>& alphas,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto emit = [&](const fs::path& file, double difficulty) {
    std::vector<DetectionSet> sets;
    for (const auto& t : data.truth) sets.push_back(fake_detections(t, std::min(1.0, difficulty), rng));
    fs::create_directories(file.parent_path());
    std::ofstream(file, std::ios::binary) << detections_to_json(sets);
  };
  const fs::path base = root / variant;
  for (double alpha : alphas) {
    const std::string name = "alpha_" + alpha_label(alpha) + ".json";
    emit(base / "saturated" / name, 0.15 * alpha);
    emit(base / "modulo" / name, 0.08 * alpha);
    emit(base / "recovery" / name, 0.06 * alpha);
  }
  emit(base / "ideal_hdr.json", 0.05);
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hdrmod_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace hdrmod::testing
