#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "rulegraph/detector.hpp"
#include "rulegraph/event.hpp"

namespace rulegraph {

/// Confusion counts with anomalies as the positive class. Ratios with a
/// zero denominator are 0.
struct Metrics {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static Metrics from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn);
  nlohmann::ordered_json to_json() const;
};

/// Scores verdicts against ground truth. Malformed inputs count as flagged.
/// Throws ValidationError when the lengths differ.
Metrics evaluate(const std::vector<DetectionResult>& results, const std::vector<Label>& truth);

}  // namespace rulegraph
