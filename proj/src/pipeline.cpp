#include "hdrmod/pipeline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hdrmod/image_io.hpp"

namespace hdrmod {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::uint8_t to_display(double code, const SensorConfig& sensor) {
  const double v = std::floor(code * 256.0 / sensor.period());
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

template <typename T>
Image<std::uint8_t> codes_to_display(const Image<T>& codes, const SensorConfig& sensor) {
  Image<std::uint8_t> out(codes.height(), codes.width(), codes.channels());
  auto src = codes.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = to_display(static_cast<double>(src[i]), sensor);
  return out;
}

// Linear 1/alpha rescale back to the unit-gain exposure, then floor.
Image<std::uint8_t> tone_map(const Image<double>& x, double alpha, const SensorConfig& sensor) {
  Image<std::uint8_t> out(x.height(), x.width(), x.channels());
  auto src = x.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = to_display(src[i] / alpha, sensor);
  return out;
}

std::size_t distinct_in_mask(const Image<std::uint8_t>& image, const Image<std::uint8_t>& mask) {
  std::array<bool, 256> seen{};
  std::size_t count = 0;
  auto px = image.values();
  auto mk = mask.values();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (mk[i] != 0 && !seen[px[i]]) {
      seen[px[i]] = true;
      ++count;
    }
  }
  return count;
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string cell_name(const std::string& variant, Mode mode, std::optional<double> alpha) {
  std::string name = variant + "/" + std::string(to_string(mode));
  if (alpha) name += "/alpha_" + alpha_label(*alpha);
  return name;
}

fs::path detections_file(const fs::path& root, const std::string& variant, Mode mode,
                         std::optional<double> alpha) {
  const fs::path base = variant == "default" ? root : root / variant;
  if (mode == Mode::IdealHDR) return base / "ideal_hdr.json";
  return base / std::string(to_string(mode)) / ("alpha_" + alpha_label(*alpha) + ".json");
}

std::vector<std::string> discover_variants(const fs::path& root) {
  if (!fs::is_directory(root)) throw ConfigError("detections directory not found: " + root.string());
  if (fs::exists(root / "ideal_hdr.json")) return {"default"};
  for (Mode m : all_modes())
    if (fs::is_directory(root / std::string(to_string(m)))) return {"default"};
  std::vector<std::string> variants;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) variants.push_back(entry.path().filename().string());
  std::sort(variants.begin(), variants.end());
  if (variants.empty()) variants.push_back("default");
  return variants;
}

std::map<std::string, double> load_timing(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open timing file " + path.string());
  std::map<std::string, double> detect_ms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() < 2) throw ParseError("timing row needs variant,detect_ms", line_no);
    double value = 0.0;
    const auto& text = cells[1];
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      if (line_no == 1) continue;  // header
      throw ParseError("bad detect_ms '" + text + "'", line_no);
    }
    detect_ms[cells[0]] = value;
  }
  return detect_ms;
}

void assign_dense_ranks(std::vector<ReportRow*>& rows, double MetricsReport::*field,
                        int ReportRow::*rank) {
  std::vector<double> values;
  for (auto* r : rows) values.push_back(r->metrics.*field);
  std::sort(values.begin(), values.end(), std::greater<>());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (auto* r : rows) {
    auto it = std::find(values.begin(), values.end(), r->metrics.*field);
    r->*rank = static_cast<int>(it - values.begin()) + 1;
  }
}

std::string mark(int rank) {
  if (rank == 1) return "best";
  if (rank == 2) return "second";
  return "";
}

}  // namespace

std::string_view to_string(Reference reference) noexcept {
  return reference == Reference::GroundTruth ? "ground_truth" : "ideal_hdr_detections";
}

std::optional<Reference> parse_reference(std::string_view text) {
  const std::string t = lower(text);
  if (t == "ground_truth" || t == "gt" || t == "groundtruth") return Reference::GroundTruth;
  if (t == "ideal_hdr_detections" || t == "ideal_hdr" || t == "idealhdrdetections" || t == "hdr")
    return Reference::IdealHdrDetections;
  return std::nullopt;
}

void RunConfig::validate() const {
  if (alphas.empty()) throw ConfigError("at least one alpha is required");
  for (double a : alphas)
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("alpha values must be positive");
  if (!(tau >= 0.0)) throw ConfigError("tau must be nonnegative");
  if (!(iou_min >= 0.0 && iou_min <= 1.0)) throw ConfigError("iou_min must lie in [0, 1]");
  if (modes.empty()) throw ConfigError("at least one mode is required");
  if (max_images == 0) throw ConfigError("image limit must be positive");
  if (!fs::is_directory(input_dir)) throw ConfigError("input directory not found: " + input_dir.string());
  if (!labels_dir.empty() && !fs::is_directory(labels_dir))
    throw ConfigError("labels directory not found: " + labels_dir.string());
  if (detections_path && !fs::is_directory(*detections_path))
    throw ConfigError("detections directory not found: " + detections_path->string());
  if (timing_path && !fs::is_regular_file(*timing_path))
    throw ConfigError("timing file not found: " + timing_path->string());
  try {
    timing.validate();
  } catch (const InvalidParam& e) {
    throw ConfigError(e.what());
  }
}

std::string alpha_label(double alpha) {
  char buf[64];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, alpha);
    if (std::strtod(buf, nullptr) == alpha) break;
  }
  return buf;
}

fs::path scenario_png_path(const fs::path& out, Mode mode, double alpha, const std::string& image_id) {
  return out / std::string(to_string(mode)) / ("alpha_" + alpha_label(alpha)) / (image_id + ".png");
}

fs::path latent_pfm_path(const fs::path& out, double alpha, const std::string& image_id) {
  return out / "latent" / ("alpha_" + alpha_label(alpha)) / (image_id + ".pfm");
}

Image<std::uint8_t> render_scenario(const HdrImage& normalized, Mode mode, double alpha,
                                    const SensorConfig& sensor, const RecoveryParams& params) {
  ScenarioConfig scenario{alpha, params.tau, mode, mode == Mode::Recovery};
  scenario.validate();
  const HdrImage x = apply_gain(normalized, alpha);
  switch (mode) {
    case Mode::Saturated:
      return codes_to_display(clamp_saturate(x, sensor).codes(), sensor);
    case Mode::Modulo:
      return codes_to_display(wrap_modulo(x, sensor).codes(), sensor);
    case Mode::Recovery:
      return tone_map(spud_reconstruct(wrap_modulo(x, sensor), sensor, params).data(), alpha, sensor);
    case Mode::IdealHDR:
      return tone_map(x.data(), alpha, sensor);
  }
  throw InvalidParam("unknown scenario mode");
}

ScenarioStats run_scenario(const RunConfig& cfg, const std::string& image_id,
                           const HdrImage& normalized, Mode mode, double alpha, bool write_latent) {
  const RecoveryParams params{cfg.tau, cfg.anchor};
  const HdrImage x = apply_gain(normalized, alpha);
  if (write_latent) write_pfm(latent_pfm_path(cfg.output_dir, alpha, image_id), x.data());

  const Image<std::uint8_t> rendered = render_scenario(normalized, mode, alpha, cfg.sensor, params);
  write_png(scenario_png_path(cfg.output_dir, mode, alpha, image_id), rendered);

  const SaturatedImage saturated = clamp_saturate(x, cfg.sensor);
  const Image<std::uint8_t> mask = saturated.saturated_mask();
  ScenarioStats stats;
  stats.image_id = image_id;
  stats.mode = mode;
  stats.alpha = alpha;
  stats.itoh = itoh_check(x, cfg.sensor);
  stats.saturated_samples = static_cast<std::size_t>(
      std::count(mask.values().begin(), mask.values().end(), std::uint8_t{1}));
  stats.distinct_saturated_codes = distinct_in_mask(rendered, mask);
  stats.baseline_distinct_codes = distinct_in_mask(codes_to_display(saturated.codes(), cfg.sensor), mask);
  return stats;
}

std::vector<fs::path> select_images(const RunConfig& cfg) {
  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(cfg.input_dir))
    if (entry.is_regular_file() && lower(entry.path().extension().string()) == ".png")
      images.push_back(entry.path());
  std::sort(images.begin(), images.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  if (cfg.seed) {
    std::mt19937_64 rng(*cfg.seed);
    for (std::size_t i = images.size(); i > 1; --i) std::swap(images[i - 1], images[rng() % i]);
  }
  if (images.size() > cfg.max_images) images.resize(cfg.max_images);
  if (cfg.seed)
    std::sort(images.begin(), images.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return images;
}

SimulationResult simulate_dataset(const RunConfig& cfg) {
  cfg.validate();
  const auto images = select_images(cfg);
  if (images.empty()) throw ConfigError("no PNG images in " + cfg.input_dir.string());

  struct PerImage {
    bool ok = false;
    std::vector<ScenarioStats> stats;
  };
  std::vector<PerImage> results(images.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < images.size(); i = next++) {
      const std::string id = images[i].stem().string();
      try {
        const PngImage png = read_png(images[i]);
        const HdrImage normalized = normalize_hdr(to_real(png.samples), cfg.sensor);
        for (double alpha : cfg.alphas) {
          bool first = true;
          for (Mode mode : cfg.modes) {
            results[i].stats.push_back(run_scenario(cfg, id, normalized, mode, alpha, first));
            first = false;
          }
        }
        results[i].ok = true;
      } catch (const IoError& e) {
        std::lock_guard lock(log_mutex);
        std::cerr << "warning: skipping " << images[i].filename().string() << ": " << e.what() << '\n';
      } catch (const InvalidImage& e) {
        std::lock_guard lock(log_mutex);
        std::cerr << "warning: skipping " << images[i].filename().string() << ": " << e.what() << '\n';
      }
    }
  };

  unsigned count = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  count = std::min<unsigned>(count, static_cast<unsigned>(images.size()));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  SimulationResult out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string id = images[i].stem().string();
    if (!results[i].ok) {
      out.skipped.push_back(id);
      continue;
    }
    out.image_ids.push_back(id);
    for (auto& s : results[i].stats) out.stats.push_back(std::move(s));
  }
  if (out.image_ids.empty()) throw ConfigError("no readable images in " + cfg.input_dir.string());
  return out;
}

RunReport sweep(const RunConfig& cfg, const SimulationResult* simulation) {
  cfg.validate();

  std::vector<std::string> image_ids;
  if (simulation != nullptr) {
    image_ids = simulation->image_ids;
  } else {
    for (const auto& p : select_images(cfg)) image_ids.push_back(p.stem().string());
  }
  if (image_ids.empty()) throw ConfigError("no images to evaluate");

  RunReport report;
  report.reference = std::string(to_string(cfg.reference));
  report.iou_min = cfg.iou_min;
  report.bit_depth = cfg.sensor.bit_depth();
  report.tau = cfg.tau;
  report.images = image_ids.size();

  std::vector<Mode> swept;
  bool with_ideal = false;
  for (Mode m : all_modes()) {
    if (std::find(cfg.modes.begin(), cfg.modes.end(), m) == cfg.modes.end()) continue;
    if (m == Mode::IdealHDR)
      with_ideal = true;
    else
      swept.push_back(m);
  }

  std::map<std::string, double> detect_ms;
  if (cfg.timing_path) detect_ms = load_timing(*cfg.timing_path);

  std::map<std::string, DetectionSet> ground_truth;
  const bool evaluate = cfg.detections_path.has_value();
  if (evaluate && cfg.reference == Reference::GroundTruth) {
    if (cfg.labels_dir.empty()) throw ConfigError("ground-truth reference needs a labels directory");
    for (const auto& id : image_ids) {
      const fs::path label = cfg.labels_dir / (id + ".txt");
      if (!fs::is_regular_file(label)) throw ConfigError("missing label file " + label.string());
      ground_truth[id] = load_kitti_labels(label);
    }
  }

  const std::vector<std::string> variants =
      evaluate ? discover_variants(*cfg.detections_path) : std::vector<std::string>{"none"};

  for (const auto& variant : variants) {
    TimingModel timing = cfg.timing;
    if (auto it = detect_ms.find(variant); it != detect_ms.end()) timing.detect_ms = it->second;

    std::optional<std::map<std::string, DetectionSet>> ideal_reference;
    if (evaluate && cfg.reference == Reference::IdealHdrDetections) {
      const fs::path file = detections_file(*cfg.detections_path, variant, Mode::IdealHDR, std::nullopt);
      if (fs::is_regular_file(file)) {
        ideal_reference.emplace();
        for (auto& set : load_detections_json(file)) (*ideal_reference)[set.image_id] = std::move(set);
      }
    }

    auto evaluate_cell = [&](ReportRow& row) {
      row.latency_ms = scenario_latency(timing, row.mode);
      if (!evaluate) return;
      const fs::path file = detections_file(*cfg.detections_path, variant, row.mode, row.alpha);
      const bool reference_ok = cfg.reference == Reference::GroundTruth || ideal_reference.has_value();
      if (!fs::is_regular_file(file) || !reference_ok) {
        report.missing.push_back(cell_name(variant, row.mode, row.alpha));
        return;
      }
      std::map<std::string, DetectionSet> preds;
      for (auto& set : load_detections_json(file)) preds[set.image_id] = std::move(set);
      std::vector<Matching> matchings;
      for (const auto& id : image_ids) {
        DetectionSet pred = preds.count(id) ? preds[id] : DetectionSet{id, {}};
        DetectionSet truth;
        if (cfg.reference == Reference::GroundTruth) {
          truth = ground_truth.at(id);
        } else {
          auto it = ideal_reference->find(id);
          truth = it != ideal_reference->end() ? it->second : DetectionSet{id, {}};
        }
        truth.image_id = id;
        pred.image_id = id;
        matchings.push_back(match_detections(pred, truth, cfg.iou_min));
      }
      row.metrics = compute_metrics(matchings);
      row.present = true;
    };

    auto attach_simulation = [&](ReportRow& row) {
      if (simulation == nullptr || !row.alpha) return;
      std::size_t n = 0;
      std::size_t itoh = 0;
      std::size_t gains = 0;
      double codes = 0.0;
      for (const auto& s : simulation->stats) {
        if (s.mode != row.mode || s.alpha != *row.alpha) continue;
        ++n;
        if (s.itoh.holds) ++itoh;
        if (s.distinct_saturated_codes > s.baseline_distinct_codes) ++gains;
        codes += static_cast<double>(s.distinct_saturated_codes);
      }
      if (n == 0) return;
      row.itoh_fraction = static_cast<double>(itoh) / static_cast<double>(n);
      row.mean_saturated_codes = codes / static_cast<double>(n);
      if (row.mode != Mode::Saturated)
        row.saturation_gain_fraction = static_cast<double>(gains) / static_cast<double>(n);
    };

    const std::size_t first = report.rows.size();
    for (Mode mode : swept) {
      for (double alpha : cfg.alphas) {
        ReportRow row;
        row.variant = variant;
        row.mode = mode;
        row.alpha = alpha;
        evaluate_cell(row);
        attach_simulation(row);
        report.rows.push_back(std::move(row));
      }
    }
    if (with_ideal) {
      ReportRow row;
      row.variant = variant;
      row.mode = Mode::IdealHDR;
      evaluate_cell(row);
      report.rows.push_back(std::move(row));
    }

    for (double alpha : cfg.alphas) {
      std::vector<ReportRow*> column;
      for (std::size_t i = first; i < report.rows.size(); ++i) {
        auto& row = report.rows[i];
        if (row.present && row.alpha && *row.alpha == alpha) column.push_back(&row);
      }
      if (column.empty()) continue;
      assign_dense_ranks(column, &MetricsReport::mean_iou, &ReportRow::iou_rank);
      assign_dense_ranks(column, &MetricsReport::f1, &ReportRow::f1_rank);
      assign_dense_ranks(column, &MetricsReport::accuracy, &ReportRow::accuracy_rank);
    }
  }
  return report;
}

void require_complete(const RunReport& report) {
  if (!report.missing.empty())
    throw EvalError("missing detections for cell " + report.missing.front() + " (" +
                    std::to_string(report.missing.size()) + " missing in total)");
}

std::string report_to_csv(const RunReport& report) {
  std::ostringstream out;
  out << "variant,mode,alpha,status,images,tp,fp,fn,mean_iou,f1,accuracy,latency_ms,"
         "iou_mark,f1_mark,accuracy_mark,itoh_fraction,mean_saturated_codes,saturation_gain_fraction\n";
  auto opt = [](const std::optional<double>& v) { return v ? fixed(*v) : std::string(); };
  for (const auto& row : report.rows) {
    out << row.variant << ',' << to_string(row.mode) << ',' << (row.alpha ? alpha_label(*row.alpha) : "")
        << ',' << (row.present ? "ok" : (row.variant == "none" ? "not_evaluated" : "missing")) << ','
        << report.images << ',';
    if (row.present) {
      out << row.metrics.tp << ',' << row.metrics.fp << ',' << row.metrics.fn << ','
          << fixed(row.metrics.mean_iou) << ',' << fixed(row.metrics.f1) << ','
          << fixed(row.metrics.accuracy);
    } else {
      out << ",,,,,";
    }
    out << ',' << fixed(row.latency_ms, 3) << ',' << mark(row.iou_rank) << ',' << mark(row.f1_rank)
        << ',' << mark(row.accuracy_rank) << ',' << opt(row.itoh_fraction) << ','
        << opt(row.mean_saturated_codes) << ',' << opt(row.saturation_gain_fraction) << '\n';
  }
  return out.str();
}

std::string report_to_json(const RunReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["reference"] = report.reference;
  doc["iou_min"] = report.iou_min;
  doc["bit_depth"] = report.bit_depth;
  doc["tau"] = report.tau;
  doc["images"] = report.images;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["variant"] = row.variant;
    r["mode"] = std::string(to_string(row.mode));
    r["alpha"] = row.alpha ? ordered_json(*row.alpha) : ordered_json(nullptr);
    r["present"] = row.present;
    if (row.present) {
      const auto& m = row.metrics;
      r["tp"] = m.tp;
      r["fp"] = m.fp;
      r["fn"] = m.fn;
      r["mean_iou"] = m.mean_iou;
      r["f1"] = m.f1;
      r["accuracy"] = m.accuracy;
      ordered_json classes = ordered_json::object();
      for (const auto& [cls, c] : m.per_class) classes[cls] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
      r["per_class"] = std::move(classes);
      r["rank"] = {{"iou", row.iou_rank}, {"f1", row.f1_rank}, {"accuracy", row.accuracy_rank}};
    }
    r["latency_ms"] = row.latency_ms;
    if (row.itoh_fraction) r["itoh_fraction"] = *row.itoh_fraction;
    if (row.mean_saturated_codes) r["mean_saturated_codes"] = *row.mean_saturated_codes;
    if (row.saturation_gain_fraction) r["saturation_gain_fraction"] = *row.saturation_gain_fraction;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  doc["missing"] = report.missing;
  return doc.dump(2) + "\n";
}

void write_report(const fs::path& out_dir, const RunReport& report) {
  fs::create_directories(out_dir);
  auto dump = [](const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
  };
  dump(out_dir / "report.csv", report_to_csv(report));
  dump(out_dir / "report.json", report_to_json(report));
}

std::vector<BenchResult> benchmark_spud(std::span<const BenchSize> sizes, std::size_t repeats,
                                        std::uint64_t seed) {
  if (repeats < 5) throw InvalidParam("benchmark needs at least 5 repeats");
  const SensorConfig sensor(8);
  std::mt19937_64 rng(seed);
  std::vector<BenchResult> results;
  for (const auto& size : sizes) {
    Image<std::uint16_t> codes(size.rows, size.cols, 1);
    for (auto& v : codes.values()) v = static_cast<std::uint16_t>(rng() % sensor.wrap_period());
    const ModuloImage y(std::move(codes), sensor);

    (void)spud_reconstruct(y, sensor);
    std::vector<double> ms;
    for (std::size_t i = 0; i < repeats; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      const HdrImage x = spud_reconstruct(y, sensor);
      const auto t1 = std::chrono::steady_clock::now();
      if (x.height() != size.rows) throw Error("unexpected reconstruction shape");
      ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }

    BenchResult r{size.rows, size.cols, repeats};
    r.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
    double var = 0.0;
    for (double v : ms) var += (v - r.mean_ms) * (v - r.mean_ms);
    r.std_ms = std::sqrt(var / static_cast<double>(ms.size() - 1));
    std::sort(ms.begin(), ms.end());
    r.median_ms = ms.size() % 2 ? ms[ms.size() / 2] : 0.5 * (ms[ms.size() / 2 - 1] + ms[ms.size() / 2]);
    r.min_ms = ms.front();
    results.push_back(r);
  }
  return results;
}

double loglog_slope(std::span<const BenchResult> results) {
  if (results.size() < 2) throw InvalidParam("slope needs at least two sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(results.size());
  for (const auto& r : results) {
    const double x = std::log(static_cast<double>(r.rows * r.cols));
    const double y = std::log(r.median_ms);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InvalidParam("slope needs distinct pixel counts");
  return (n * sxy - sx * sy) / denom;
}

std::string bench_to_csv(std::span<const BenchResult> results) {
  std::ostringstream out;
  out << "width,height,pixels,repeats,mean_ms,std_ms,median_ms,min_ms\n";
  for (const auto& r : results)
    out << r.cols << ',' << r.rows << ',' << r.rows * r.cols << ',' << r.repeats << ','
        << fixed(r.mean_ms, 4) << ',' << fixed(r.std_ms, 4) << ',' << fixed(r.median_ms, 4) << ','
        << fixed(r.min_ms, 4) << '\n';
  return out.str();
}

}  // namespace hdrmod
