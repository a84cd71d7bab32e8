#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rulegraph/ruleset.hpp"
#include "rulegraph/type_config.hpp"

namespace rulegraph {

struct Archetype {
  std::string role;                   // "Instance" -> ...Service-InstanceRole-XXXX
  std::vector<std::string> services;  // candidate service prefixes
  std::vector<std::string> operations;
  std::size_t actors = 12;
};

/// Parameters of a labeled synthetic corpus.
struct GeneratorSpec {
  /// "motivating" (the fixed 12-event example), "synthetic" or "bench".
  std::string preset = "synthetic";
  std::uint64_t seed = 1;
  std::size_t train_events = 50000;
  std::size_t test_events = 5000;
  double anomaly_rate = 0.10;
  std::vector<Archetype> archetypes;  // empty: preset defaults
  std::vector<std::string> shared_operations;
  std::size_t resources = 30;
  std::vector<std::string> asns;
  std::size_t suffix_length = 4;
  /// Bytes of unmodeled padding per event ("bench" preset).
  std::size_t padding = 0;

  static GeneratorSpec preset_defaults(const std::string& preset);
  static GeneratorSpec from_json(const nlohmann::ordered_json& j);
  void validate() const;
};

struct Corpus {
  /// JSON Lines, train all normal; test carries `_label`.
  std::vector<std::string> train;
  std::vector<std::string> test;
  TypeConfig types;
};

/// Deterministic for a given spec.
Corpus generate(const GeneratorSpec& spec);

/// Type configuration used by every preset.
TypeConfig preset_types();

/// 50 rules (10 roles x 5 operations) matching the "bench" corpus shape.
Ruleset bench_ruleset();

}  // namespace rulegraph
