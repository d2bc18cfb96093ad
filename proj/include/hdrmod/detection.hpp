#pragma once

// Ground truth / prediction data model, greedy box matching, the IoU, F1 and
// accuracy metrics, and the capture + recovery + detection latency model.

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hdrmod/sensor.hpp"

namespace hdrmod {

/// Axis-aligned box: (j1, k1) top-left, (j2, k2) bottom-right, in pixels.
struct BoundingBox {
  double j1 = 0.0;
  double k1 = 0.0;
  double j2 = 0.0;
  double k2 = 0.0;
  std::string cls;
  double score = 1.0;
  /// KITTI "DontCare" regions: never counted as FN, absorb stray predictions.
  bool excluded = false;

  double area() const noexcept { return (j2 - j1) * (k2 - k1); }
  void validate() const;
};

struct DetectionSet {
  std::string image_id;
  std::vector<BoundingBox> boxes;
};

struct MatchedPair {
  std::size_t pred = 0;
  std::size_t truth = 0;
  double iou = 0.0;
};

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  bool operator==(const ClassCounts&) const = default;
};

struct Matching {
  std::string image_id;
  double iou_min = 0.5;
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> false_positives;  ///< prediction indices
  std::vector<std::size_t> false_negatives;  ///< truth indices
  std::vector<std::size_t> ignored;          ///< predictions absorbed by DontCare
  std::map<std::string, ClassCounts> per_class;

  std::size_t tp() const noexcept { return pairs.size(); }
  std::size_t fp() const noexcept { return false_positives.size(); }
  std::size_t fn() const noexcept { return false_negatives.size(); }
};

struct MetricsReport {
  double mean_iou = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t images = 0;
  std::map<std::string, ClassCounts> per_class;
};

struct TimingModel {
  double capture_ms = 33.0;
  int hdr_exposures = 3;
  double spud_ms = 5.1;
  double detect_ms = 0.0;

  void validate() const;
};

std::string normalize_class(std::string_view label);

/// Parses a KITTI label file. `image_id` names the resulting set.
DetectionSet parse_kitti_labels(std::string_view text, std::string image_id = "kitti");
DetectionSet load_kitti_labels(const std::filesystem::path& path);

double iou(const BoundingBox& a, const BoundingBox& b);

Matching match_detections(const DetectionSet& preds, const DetectionSet& truth,
                          double iou_min = 0.5);

MetricsReport compute_metrics(std::span<const Matching> matchings);

double f1_score(std::size_t tp, std::size_t fp, std::size_t fn);
double accuracy_score(std::size_t tp, std::size_t fp, std::size_t fn);

double scenario_latency(const TimingModel& model, Mode mode);

// Shared detections JSON: [{"image_id": ..., "boxes": [{j1,k1,j2,k2,class,score}]}]
std::vector<DetectionSet> parse_detections_json(std::string_view text);
std::vector<DetectionSet> load_detections_json(const std::filesystem::path& path);
std::string detections_to_json(std::span<const DetectionSet> sets);

}  // namespace hdrmod
