// hdrmod: simulate modulo / saturated sensors over an image set, recover HDR
// images, score detector output and time the recovery solver.
//
// Exit status: 0 success, 2 configuration error, 3 evaluation error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hdrmod/detection.hpp"
#include "hdrmod/errors.hpp"
#include "hdrmod/image_io.hpp"
#include "hdrmod/pipeline.hpp"

namespace fs = std::filesystem;
using namespace hdrmod;

namespace {

constexpr int kConfigError = 2;
constexpr int kEvalError = 3;

// Options shared by simulate and sweep, kept as strings until validated.
struct SimOptions {
  std::string input;
  std::string labels;
  std::string out = "out";
  int bit_depth = 8;
  std::vector<double> alphas{1.5, 2.0, 3.0, 4.0};
  double tau = 0.0;
  std::string anchor = "first-pixel";
  std::vector<std::string> modes;
  std::optional<std::uint64_t> seed;
  std::size_t limit = 100;
  unsigned workers = 0;
};

void add_sim_options(CLI::App* cmd, SimOptions& o) {
  cmd->add_option("--input", o.input, "directory of source PNG images")->required();
  cmd->add_option("--labels", o.labels, "directory of KITTI label files");
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--bit-depth", o.bit_depth, "sensor bit depth b")->capture_default_str();
  cmd->add_option("--alpha", o.alphas, "saturation factors")->delimiter(',')->capture_default_str();
  cmd->add_option("--tau", o.tau, "spectral hard threshold")->capture_default_str();
  cmd->add_option("--anchor", o.anchor, "recovery offset: first-pixel | zero-min")->capture_default_str();
  cmd->add_option("--mode", o.modes, "saturated,modulo,recovery,ideal_hdr (default: all)")->delimiter(',');
  cmd->add_option("--seed", o.seed, "sample images with this seed instead of taking the first ones");
  cmd->add_option("--limit", o.limit, "number of images")->capture_default_str();
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)")->capture_default_str();
}

AnchorPolicy parse_anchor(const std::string& text) {
  if (text == "first-pixel" || text == "first_pixel") return AnchorPolicy::MatchFirstPixel;
  if (text == "zero-min" || text == "zero_min") return AnchorPolicy::ZeroMin;
  throw ConfigError("unknown anchor '" + text + "'");
}

RunConfig make_config(const SimOptions& o) {
  RunConfig cfg;
  cfg.input_dir = o.input;
  cfg.labels_dir = o.labels;
  cfg.output_dir = o.out;
  cfg.sensor = SensorConfig(o.bit_depth);
  cfg.alphas = o.alphas;
  cfg.tau = o.tau;
  cfg.anchor = parse_anchor(o.anchor);
  if (!o.modes.empty()) {
    cfg.modes.clear();
    for (const auto& m : o.modes) {
      auto mode = parse_mode(m);
      if (!mode) throw ConfigError("unknown mode '" + m + "'");
      cfg.modes.push_back(*mode);
    }
  }
  cfg.seed = o.seed;
  cfg.max_images = o.limit;
  cfg.workers = o.workers;
  cfg.validate();
  return cfg;
}

void print_simulation(const SimulationResult& sim, const RunConfig& cfg) {
  std::printf("simulated %zu images (%zu skipped) into %s\n", sim.image_ids.size(), sim.skipped.size(),
              cfg.output_dir.string().c_str());
  for (double alpha : cfg.alphas) {
    std::size_t n = 0, itoh = 0;
    for (const auto& s : sim.stats)
      if (s.alpha == alpha && s.mode == cfg.modes.front()) {
        ++n;
        itoh += s.itoh.holds ? 1 : 0;
      }
    std::printf("  alpha %-5s Itoh condition holds on %zu/%zu images\n", alpha_label(alpha).c_str(), itoh, n);
  }
}

int run_simulate(const SimOptions& o) {
  const RunConfig cfg = make_config(o);
  print_simulation(simulate_dataset(cfg), cfg);
  return 0;
}

struct SweepOptions {
  SimOptions sim;
  std::string detections;
  std::string timing;
  std::string reference = "ground_truth";
  double iou_min = 0.5;
};

int run_sweep(const SweepOptions& o) {
  RunConfig cfg = make_config(o.sim);
  if (!o.detections.empty()) cfg.detections_path = o.detections;
  if (!o.timing.empty()) cfg.timing_path = o.timing;
  auto reference = parse_reference(o.reference);
  if (!reference) throw ConfigError("unknown reference '" + o.reference + "'");
  cfg.reference = *reference;
  cfg.iou_min = o.iou_min;
  cfg.validate();

  const SimulationResult sim = simulate_dataset(cfg);
  print_simulation(sim, cfg);
  const RunReport report = sweep(cfg, &sim);
  write_report(cfg.output_dir, report);
  std::cout << report_to_csv(report);
  if (!cfg.detections_path) std::cerr << "note: no --detections given; report holds simulation statistics only\n";
  require_complete(report);
  return 0;
}

struct EvalOptions {
  std::string detections;
  std::string labels;
  std::string truth;
  std::string reference = "ground_truth";
  double iou_min = 0.5;
  std::string out;
};

int run_evaluate(const EvalOptions& o) {
  auto reference = parse_reference(o.reference);
  if (!reference) throw ConfigError("unknown reference '" + o.reference + "'");
  if (!(o.iou_min > 0.0 && o.iou_min <= 1.0)) throw ConfigError("--iou-min must lie in (0, 1]");

  std::map<std::string, DetectionSet> truth;
  if (*reference == Reference::GroundTruth) {
    if (o.labels.empty()) throw ConfigError("ground-truth evaluation needs --labels");
  } else {
    if (o.truth.empty()) throw ConfigError("ideal-HDR reference needs --truth <detections.json>");
    for (auto& set : load_detections_json(o.truth)) truth[set.image_id] = std::move(set);
  }

  std::vector<Matching> matchings;
  for (auto& pred : load_detections_json(o.detections)) {
    DetectionSet ref;
    if (*reference == Reference::GroundTruth) {
      const fs::path label = fs::path(o.labels) / (pred.image_id + ".txt");
      if (!fs::is_regular_file(label)) throw EvalError("no label file for image " + pred.image_id);
      ref = load_kitti_labels(label);
    } else {
      auto it = truth.find(pred.image_id);
      ref = it != truth.end() ? it->second : DetectionSet{pred.image_id, {}};
    }
    ref.image_id = pred.image_id;
    matchings.push_back(match_detections(pred, ref, o.iou_min));
  }
  const MetricsReport m = compute_metrics(matchings);

  nlohmann::ordered_json j;
  j["images"] = m.images;
  j["iou_min"] = o.iou_min;
  j["reference"] = std::string(to_string(*reference));
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["fn"] = m.fn;
  j["mean_iou"] = m.mean_iou;
  j["f1"] = m.f1;
  j["accuracy"] = m.accuracy;
  for (const auto& [cls, c] : m.per_class) j["per_class"][cls] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
  const std::string text = j.dump(2) + "\n";
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw IoError("cannot write " + o.out);
    f << text;
  }
  std::cout << text;
  return 0;
}

struct ReconstructOptions {
  std::string input;
  std::string out;
  std::string png;
  int bit_depth = 8;
  double tau = 0.0;
  double alpha = 1.0;
  std::string anchor = "first-pixel";
};

int run_reconstruct(const ReconstructOptions& o) {
  const SensorConfig sensor(o.bit_depth);
  if (!(o.alpha > 0.0)) throw ConfigError("--alpha must be positive");
  const PngImage png = read_png(o.input);
  const ModuloImage y(png.samples, sensor);
  const HdrImage x = spud_reconstruct(y, sensor, {o.tau, parse_anchor(o.anchor)});
  write_pfm(o.out, x.data());
  if (!o.png.empty()) {
    // Same display mapping as the Recovery scenario: divide out the gain.
    Image<std::uint8_t> display(x.height(), x.width(), x.channels());
    const double scale = 256.0 / (o.alpha * sensor.period());
    for (std::size_t i = 0; i < display.size(); ++i)
      display.values()[i] =
          static_cast<std::uint8_t>(std::clamp(std::floor(x.data().values()[i] * scale), 0.0, 255.0));
    write_png(o.png, display);
  }
  const auto values = x.data().values();
  std::printf("recovered %zux%zux%zu, range [%g, %g]\n", x.height(), x.width(), x.channels(),
              *std::min_element(values.begin(), values.end()), *std::max_element(values.begin(), values.end()));
  return 0;
}

BenchSize parse_size(const std::string& text) {
  // WxH, e.g. 1242x375
  const auto x = text.find_first_of("xX");
  BenchSize s;
  if (x == std::string::npos) throw ConfigError("size '" + text + "' is not WxH");
  auto parse = [&](std::string_view part, std::size_t& v) {
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || p != part.data() + part.size() || v < 2)
      throw ConfigError("size '" + text + "' is not WxH with W, H >= 2");
  };
  parse(std::string_view(text).substr(0, x), s.cols);
  parse(std::string_view(text).substr(x + 1), s.rows);
  return s;
}

struct BenchOptions {
  std::vector<std::string> sizes{"128x128", "256x256", "512x512", "1242x375", "1024x1024"};
  std::size_t repeats = 20;
  std::uint64_t seed = 0;
  std::string out = "out";
};

int run_bench(const BenchOptions& o) {
  std::vector<BenchSize> sizes;
  for (const auto& s : o.sizes) sizes.push_back(parse_size(s));
  if (o.repeats < 5) throw ConfigError("--repeats must be at least 5");
  const auto results = benchmark_spud(sizes, o.repeats, o.seed);
  fs::create_directories(o.out);
  const fs::path csv = fs::path(o.out) / "bench.csv";
  std::ofstream(csv, std::ios::binary) << bench_to_csv(results);
  for (const auto& r : results)
    std::printf("%5zux%-5zu  mean %8.3f ms  std %7.3f  median %8.3f  min %8.3f\n", r.cols, r.rows, r.mean_ms,
                r.std_ms, r.median_ms, r.min_ms);
  if (results.size() >= 2) std::printf("log-log slope vs pixels: %.3f\n", loglog_slope(results));
  std::printf("wrote %s\n", csv.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modulo-sensor HDR simulation, recovery and detection scoring"};
  app.require_subcommand(1);

  SimOptions sim;
  auto* simulate = app.add_subcommand("simulate", "write per-scenario PNGs and latent PFMs");
  add_sim_options(simulate, sim);

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "simulate, then score detections for every (mode, alpha) cell");
  add_sim_options(sweep_cmd, sw.sim);
  sweep_cmd->add_option("--detections", sw.detections, "root of <variant>/<mode>/alpha_<a>.json files");
  sweep_cmd->add_option("--timing", sw.timing, "CSV of variant,detect_ms");
  sweep_cmd->add_option("--reference", sw.reference, "ground_truth | ideal_hdr_detections")->capture_default_str();
  sweep_cmd->add_option("--iou-min", sw.iou_min, "IoU threshold for a match")->capture_default_str();

  EvalOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "score one detections JSON file");
  evaluate->add_option("--detections", ev.detections, "detections JSON")->required();
  evaluate->add_option("--labels", ev.labels, "KITTI label directory");
  evaluate->add_option("--truth", ev.truth, "reference detections JSON (ideal_hdr_detections)");
  evaluate->add_option("--reference", ev.reference, "ground_truth | ideal_hdr_detections")->capture_default_str();
  evaluate->add_option("--iou-min", ev.iou_min, "IoU threshold for a match")->capture_default_str();
  evaluate->add_option("--out", ev.out, "also write the metrics JSON here");

  ReconstructOptions rc;
  auto* reconstruct = app.add_subcommand("reconstruct", "recover an HDR image from a modulo PNG");
  reconstruct->add_option("--input", rc.input, "modulo-coded PNG")->required();
  reconstruct->add_option("--out", rc.out, "output PFM")->required();
  reconstruct->add_option("--png", rc.png, "optional 8-bit display PNG");
  reconstruct->add_option("--bit-depth", rc.bit_depth, "sensor bit depth b")->capture_default_str();
  reconstruct->add_option("--tau", rc.tau, "spectral hard threshold")->capture_default_str();
  reconstruct->add_option("--alpha", rc.alpha, "gain divided out for --png")->capture_default_str();
  reconstruct->add_option("--anchor", rc.anchor, "first-pixel | zero-min")->capture_default_str();

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "time the recovery solver");
  bench->add_option("--sizes", bo.sizes, "WxH sizes")->delimiter(',')->capture_default_str();
  bench->add_option("--repeats", bo.repeats, "timed runs per size (>= 5)")->capture_default_str();
  bench->add_option("--seed", bo.seed, "seed for the random codes")->capture_default_str();
  bench->add_option("--out", bo.out, "directory for bench.csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*sweep_cmd) return run_sweep(sw);
    if (*evaluate) return run_evaluate(ev);
    if (*reconstruct) return run_reconstruct(rc);
    if (*bench) return run_bench(bo);
  } catch (const EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << '\n';
    return kEvalError;
  } catch (const ParseError& e) {
    std::cerr << "evaluation error: " << e.what() << '\n';
    return kEvalError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return 0;
}
