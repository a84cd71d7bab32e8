#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "rulegraph/event.hpp"
#include "rulegraph/ruleset.hpp"

namespace rulegraph {

enum class Verdict { kNormal, kAnomalous, kMalformed };

enum class AnomalyKind { kNone, kUnknownSignature, kValueMismatch };

struct DetectionResult {
  Verdict verdict = Verdict::kNormal;
  std::optional<std::string> rule_id;
  AnomalyKind kind = AnomalyKind::kNone;
  /// Same-signature rules agreeing on the most keys (at most three).
  std::vector<std::string> nearest_rules;
  /// Keys that failed against the first nearest rule.
  std::vector<std::string> failed_keys;
  /// Ingestion error text for malformed input.
  std::string error;

  nlohmann::ordered_json to_json() const;
};

std::string_view to_string(Verdict v);
std::string_view to_string(AnomalyKind k);

struct DetectCounters {
  std::uint64_t total = 0;
  std::uint64_t normal = 0;
  std::uint64_t anomalous = 0;
  std::uint64_t malformed = 0;
  std::uint64_t bytes = 0;
  double seconds = 0.0;

  double events_per_second() const { return seconds > 0 ? static_cast<double>(total) / seconds : 0.0; }
  double megabytes_per_second() const { return seconds > 0 ? static_cast<double>(bytes) / 1e6 / seconds : 0.0; }
  nlohmann::ordered_json to_json() const;
};

/// Immutable matcher over a ruleset; safe for concurrent use.
class Detector {
 public:
  explicit Detector(Ruleset rs);

  const Ruleset& ruleset() const { return rs_; }

  DetectionResult match_event(const EventRecord& e) const;
  /// Number of rules matching the event (0 or 1 for a valid ruleset).
  std::size_t count_matches(const EventRecord& e) const;

  /// Classifies raw JSON Lines, preserving input order. `workers` = 1 keeps
  /// everything on the calling thread.
  std::vector<DetectionResult> detect_lines(const std::vector<std::string>& lines, DetectCounters& counters,
                                            unsigned workers = 1) const;

  std::vector<DetectionResult> detect_events(const std::vector<EventRecord>& events, DetectCounters& counters,
                                             unsigned workers = 1) const;

 private:
  struct CompiledRule {
    std::size_t index;
    std::vector<CompiledPattern> patterns;
  };
  const std::vector<CompiledRule>* bucket(const EventRecord& e) const;

  Ruleset rs_;
  std::unordered_map<std::string, std::vector<CompiledRule>> buckets_;
};

/// Convenience wrapper over a ruleset.
inline DetectionResult match_event(const Detector& d, const EventRecord& e) { return d.match_event(e); }

struct GeneralizationViolation {
  std::size_t event_index = 0;
  std::size_t matches = 0;
};

/// Training events not matched by exactly one rule.
std::vector<GeneralizationViolation> generalization_check(const Ruleset& rs, const std::vector<EventRecord>& events);

/// Reads non-empty lines.
std::vector<std::string> read_lines(std::istream& in);

}  // namespace rulegraph
