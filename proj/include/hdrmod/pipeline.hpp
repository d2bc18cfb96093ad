#pragma once

// Batch orchestration: simulate sensor scenarios over a directory of images,
// evaluate detector output per (variant, mode, alpha) cell, and time the
// recovery solver.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdrmod/detection.hpp"
#include "hdrmod/sensor.hpp"
#include "hdrmod/spud.hpp"

namespace hdrmod {

enum class Reference { GroundTruth, IdealHdrDetections };

std::string_view to_string(Reference reference) noexcept;
std::optional<Reference> parse_reference(std::string_view text);

struct RunConfig {
  std::filesystem::path input_dir;
  std::filesystem::path labels_dir;
  std::filesystem::path output_dir;
  SensorConfig sensor{8};
  std::vector<double> alphas{1.5, 2.0, 3.0, 4.0};
  double tau = 0.0;
  AnchorPolicy anchor = AnchorPolicy::MatchFirstPixel;
  std::vector<Mode> modes = all_modes();
  double iou_min = 0.5;
  Reference reference = Reference::GroundTruth;
  std::optional<std::filesystem::path> detections_path;
  /// CSV "variant,detect_ms[,...]" as produced by the detector latency harness.
  std::optional<std::filesystem::path> timing_path;
  /// Unset: first `max_images` by sorted filename. Set: seeded sample.
  std::optional<std::uint64_t> seed;
  std::size_t max_images = 100;
  /// 0 = one worker per hardware thread.
  unsigned workers = 0;
  TimingModel timing;

  /// Throws ConfigError on empty/nonpositive alphas, missing input directory,
  /// bad thresholds or an empty mode list.
  void validate() const;
};

/// "1.5", "2", "3.25": shortest round-trip form used in paths and reports.
std::string alpha_label(double alpha);

std::filesystem::path scenario_png_path(const std::filesystem::path& out, Mode mode, double alpha,
                                        const std::string& image_id);
std::filesystem::path latent_pfm_path(const std::filesystem::path& out, double alpha,
                                      const std::string& image_id);

/// 8-bit image handed to the detector for one scenario. `normalized` is the
/// [0, 2^b] latent before gain.
Image<std::uint8_t> render_scenario(const HdrImage& normalized, Mode mode, double alpha,
                                    const SensorConfig& sensor, const RecoveryParams& params);

struct ScenarioStats {
  std::string image_id;
  Mode mode = Mode::Saturated;
  double alpha = 1.0;
  ItohResult itoh;
  /// Samples at the saturated sensor's code ceiling.
  std::size_t saturated_samples = 0;
  /// Distinct output codes of this scenario inside the saturated samples.
  std::size_t distinct_saturated_codes = 0;
  /// Same count for the conventional saturated sensor (the baseline).
  std::size_t baseline_distinct_codes = 0;
};

ScenarioStats run_scenario(const RunConfig& cfg, const std::string& image_id,
                           const HdrImage& normalized, Mode mode, double alpha,
                           bool write_latent = true);

std::vector<std::filesystem::path> select_images(const RunConfig& cfg);

struct SimulationResult {
  std::vector<std::string> image_ids;
  std::vector<ScenarioStats> stats;  ///< image-major, then alpha, then mode
  std::vector<std::string> skipped;
};

/// Runs every configured (mode, alpha) scenario over the selected images.
SimulationResult simulate_dataset(const RunConfig& cfg);

struct ReportRow {
  std::string variant;
  Mode mode = Mode::Saturated;
  std::optional<double> alpha;  ///< empty for the alpha-independent IdealHDR row
  bool present = false;
  MetricsReport metrics;
  double latency_ms = 0.0;
  /// Dense rank among non-IdealHDR rows sharing (variant, alpha); 0 = unranked.
  int iou_rank = 0;
  int f1_rank = 0;
  int accuracy_rank = 0;
  std::optional<double> itoh_fraction;
  std::optional<double> mean_saturated_codes;
  std::optional<double> saturation_gain_fraction;
};

struct RunReport {
  std::string reference;
  double iou_min = 0.5;
  int bit_depth = 8;
  double tau = 0.0;
  std::size_t images = 0;
  std::vector<ReportRow> rows;
  std::vector<std::string> missing;  ///< "<variant>/<mode>/alpha_<a>" cells without detections
};

/// Builds the (variant, mode, alpha) report. `simulation` supplies image ids and the
/// per-scenario statistics; when null, images are re-selected from cfg.
RunReport sweep(const RunConfig& cfg, const SimulationResult* simulation = nullptr);

/// Throws EvalError naming the first missing cell.
void require_complete(const RunReport& report);

std::string report_to_csv(const RunReport& report);
std::string report_to_json(const RunReport& report);
void write_report(const std::filesystem::path& out_dir, const RunReport& report);

struct BenchSize {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

struct BenchResult {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t repeats = 0;
  double mean_ms = 0.0;
  double std_ms = 0.0;
  double median_ms = 0.0;
  double min_ms = 0.0;
};

/// Wall-clock statistics of single-channel spud_reconstruct at b = 8. One
/// untimed warm-up run per size; repeats must be >= 5.
std::vector<BenchResult> benchmark_spud(std::span<const BenchSize> sizes, std::size_t repeats,
                                        std::uint64_t seed = 0);

/// Least-squares slope of log(median time) against log(pixel count).
double loglog_slope(std::span<const BenchResult> results);

std::string bench_to_csv(std::span<const BenchResult> results);

}  // namespace hdrmod
