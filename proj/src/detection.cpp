#include "hdrmod/detection.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace hdrmod {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool parse_double(std::string_view token, double& value) {
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

}  // namespace

void BoundingBox::validate() const {
  if (!(j1 <= j2) || !(k1 <= k2)) throw InvalidParam("box corners out of order");
  if (j1 < 0.0 || k1 < 0.0) throw InvalidParam("box coordinates must be nonnegative");
  if (!(score >= 0.0 && score <= 1.0)) throw InvalidParam("score must lie in [0, 1]");
}

void TimingModel::validate() const {
  if (capture_ms < 0.0 || spud_ms < 0.0 || detect_ms < 0.0 || hdr_exposures < 0)
    throw InvalidParam("timing model fields must be nonnegative");
}

std::string normalize_class(std::string_view label) {
  std::string out(label);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

DetectionSet parse_kitti_labels(std::string_view text, std::string image_id) {
  DetectionSet set{std::move(image_id), {}};
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(std::move(t));
    if (tokens.empty()) continue;
    if (tokens.size() < 8) throw ParseError("expected at least 8 fields", line_no);

    double coords[4];
    for (int i = 0; i < 4; ++i)
      if (!parse_double(tokens[4 + i], coords[i]))
        throw ParseError("bad bounding box value '" + tokens[4 + i] + "'", line_no);

    BoundingBox box;
    box.cls = normalize_class(tokens[0]);
    box.j1 = coords[0];
    box.k1 = coords[1];
    box.j2 = coords[2];
    box.k2 = coords[3];
    box.excluded = box.cls == "dontcare";
    try {
      box.validate();
    } catch (const InvalidParam& e) {
      throw ParseError(e.what(), line_no);
    }
    set.boxes.push_back(std::move(box));
  }
  return set;
}

DetectionSet load_kitti_labels(const std::filesystem::path& path) {
  return parse_kitti_labels(read_file(path), path.stem().string());
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.j2, b.j2) - std::max(a.j1, b.j1);
  const double ih = std::min(a.k2, b.k2) - std::max(a.k1, b.k1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Matching match_detections(const DetectionSet& preds, const DetectionSet& truth, double iou_min) {
  if (preds.image_id != truth.image_id)
    throw EvalError("image id mismatch: '" + preds.image_id + "' vs '" + truth.image_id + "'");
  if (!(iou_min >= 0.0 && iou_min <= 1.0)) throw InvalidParam("iou_min must lie in [0, 1]");

  Matching result;
  result.image_id = preds.image_id;
  result.iou_min = iou_min;

  struct Candidate {
    double iou;
    std::size_t pred;
    std::size_t truth;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < preds.boxes.size(); ++p) {
    for (std::size_t t = 0; t < truth.boxes.size(); ++t) {
      const auto& tb = truth.boxes[t];
      if (tb.excluded || tb.cls != preds.boxes[p].cls) continue;
      const double overlap = iou(preds.boxes[p], tb);
      if (overlap >= iou_min && overlap > 0.0) candidates.push_back({overlap, p, t});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    return std::tie(a.pred, a.truth) < std::tie(b.pred, b.truth);
  });

  std::vector<bool> pred_used(preds.boxes.size(), false);
  std::vector<bool> truth_used(truth.boxes.size(), false);
  for (const auto& c : candidates) {
    if (pred_used[c.pred] || truth_used[c.truth]) continue;
    pred_used[c.pred] = truth_used[c.truth] = true;
    result.pairs.push_back({c.pred, c.truth, c.iou});
    ++result.per_class[preds.boxes[c.pred].cls].tp;
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.pred < b.pred; });

  for (std::size_t p = 0; p < preds.boxes.size(); ++p) {
    if (pred_used[p]) continue;
    const bool in_dont_care = std::any_of(truth.boxes.begin(), truth.boxes.end(), [&](const auto& tb) {
      return tb.excluded && iou(preds.boxes[p], tb) >= iou_min;
    });
    if (in_dont_care) {
      result.ignored.push_back(p);
    } else {
      result.false_positives.push_back(p);
      ++result.per_class[preds.boxes[p].cls].fp;
    }
  }
  for (std::size_t t = 0; t < truth.boxes.size(); ++t) {
    if (truth_used[t] || truth.boxes[t].excluded) continue;
    result.false_negatives.push_back(t);
    ++result.per_class[truth.boxes[t].cls].fn;
  }
  return result;
}

double f1_score(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double accuracy_score(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = tp + fp + fn;
  return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

MetricsReport compute_metrics(std::span<const Matching> matchings) {
  if (matchings.empty()) throw EvalError("no matchings to aggregate");
  MetricsReport report;
  const double iou_min = matchings.front().iou_min;
  double iou_sum = 0.0;
  for (const auto& m : matchings) {
    if (m.iou_min != iou_min) throw EvalError("matchings use inconsistent iou_min");
    report.tp += m.tp();
    report.fp += m.fp();
    report.fn += m.fn();
    for (const auto& pair : m.pairs) iou_sum += pair.iou;
    for (const auto& [cls, counts] : m.per_class) {
      auto& agg = report.per_class[cls];
      agg.tp += counts.tp;
      agg.fp += counts.fp;
      agg.fn += counts.fn;
    }
  }
  report.images = matchings.size();
  report.mean_iou = report.tp == 0 ? 0.0 : iou_sum / static_cast<double>(report.tp);
  report.f1 = f1_score(report.tp, report.fp, report.fn);
  report.accuracy = accuracy_score(report.tp, report.fp, report.fn);
  return report;
}

double scenario_latency(const TimingModel& model, Mode mode) {
  model.validate();
  switch (mode) {
    case Mode::Saturated:
    case Mode::Modulo:
      return model.capture_ms + model.detect_ms;
    case Mode::Recovery:
      return model.capture_ms + model.spud_ms + model.detect_ms;
    case Mode::IdealHDR:
      return model.hdr_exposures * model.capture_ms + model.detect_ms;
  }
  return 0.0;
}

std::vector<DetectionSet> parse_detections_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid detections JSON: ") + e.what(), 0);
  }
  if (!doc.is_array()) throw ParseError("detections JSON must be an array", 0);

  std::vector<DetectionSet> sets;
  for (const auto& record : doc) {
    try {
      DetectionSet set;
      set.image_id = record.at("image_id").get<std::string>();
      if (set.image_id.empty()) throw ParseError("empty image_id", 0);
      for (const auto& b : record.at("boxes")) {
        BoundingBox box;
        box.j1 = b.at("j1").get<double>();
        box.k1 = b.at("k1").get<double>();
        box.j2 = b.at("j2").get<double>();
        box.k2 = b.at("k2").get<double>();
        box.cls = normalize_class(b.at("class").get<std::string>());
        box.score = b.value("score", 1.0);
        box.validate();
        set.boxes.push_back(std::move(box));
      }
      sets.push_back(std::move(set));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed detection record: ") + e.what(), 0);
    } catch (const InvalidParam& e) {
      throw ParseError(std::string("invalid box: ") + e.what(), 0);
    }
  }
  return sets;
}

std::vector<DetectionSet> load_detections_json(const std::filesystem::path& path) {
  return parse_detections_json(read_file(path));
}

std::string detections_to_json(std::span<const DetectionSet> sets) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& set : sets) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& b : set.boxes)
      boxes.push_back({{"j1", b.j1}, {"k1", b.k1}, {"j2", b.j2}, {"k2", b.k2},
                       {"class", b.cls}, {"score", b.score}});
    doc.push_back({{"image_id", set.image_id}, {"boxes", std::move(boxes)}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace hdrmod
