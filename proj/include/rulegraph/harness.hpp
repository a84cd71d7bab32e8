#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rulegraph/detector.hpp"
#include "rulegraph/metrics.hpp"
#include "rulegraph/ruleset.hpp"
#include "rulegraph/trainer.hpp"

namespace rulegraph {

enum class PerturbMode { kDrop, kDuplicate, kShuffle };

PerturbMode parse_perturb_mode(const std::string& s);

/// Drops, re-inserts, or permutes floor(level * n) events. level in [0, 0.99].
std::vector<std::string> perturb(const std::vector<std::string>& lines, PerturbMode mode, double level,
                                 std::uint64_t seed);

struct PipelineResult {
  Ruleset ruleset;
  TrainReport report;
  std::vector<DetectionResult> results;
  Metrics metrics;
};

/// train -> detect -> eval on JSON Lines. Test lines without `_label` are
/// taken as normal; malformed test lines count as flagged.
PipelineResult run_pipeline(const std::vector<std::string>& train_lines, const std::vector<std::string>& test_lines,
                            const TypeConfig& types, const TrainConfig& cfg);

struct SweepRow {
  int k = 0;
  double threshold = 0.0;
  Metrics metrics;
  std::size_t rules = 0;
  double train_seconds = 0.0;
};

/// One train+eval per (k, threshold) cell, cells run on up to `workers`
/// threads. Rows come back in grid order regardless of scheduling.
std::vector<SweepRow> sweep(const std::vector<std::string>& train_lines, const std::vector<std::string>& test_lines,
                            const TypeConfig& types, const TrainConfig& base, const std::vector<int>& ks,
                            const std::vector<double>& thresholds, unsigned workers = 1);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Per k, whether recall never increases as the threshold rises. Reported
/// only; the direction is an expectation, not a guarantee.
nlohmann::ordered_json sweep_trends(const std::vector<SweepRow>& rows);

struct BenchReport {
  std::size_t rules = 0;
  std::size_t events = 0;
  std::uint64_t bytes = 0;
  unsigned workers = 1;
  double events_per_second_with_parse = 0.0;
  double mb_per_second_with_parse = 0.0;
  double events_per_second_match_only = 0.0;
  double mb_per_second_match_only = 0.0;

  nlohmann::ordered_json to_json() const;
};

/// Times detection over the lines: once including JSON parsing and
/// flattening, once over pre-parsed events.
BenchReport bench(const Ruleset& rs, const std::vector<std::string>& lines, unsigned workers = 1);

}  // namespace rulegraph
