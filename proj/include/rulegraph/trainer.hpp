#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "rulegraph/event.hpp"
#include "rulegraph/hypergraph.hpp"
#include "rulegraph/ruleset.hpp"
#include "rulegraph/similarity.hpp"
#include "rulegraph/synth.hpp"
#include "rulegraph/type_config.hpp"

namespace rulegraph {

struct TrainConfig {
  SimParams sim;
  SynthConfig synth;
  int max_outer_iterations = 50;
  /// Candidate pairs considered per round, best first.
  std::size_t pair_cap = 100000;

  void validate() const;
};

struct TrainReport {
  int rounds = 0;
  std::uint64_t attempted = 0;
  std::uint64_t committed_full = 0;
  std::uint64_t committed_partial = 0;
  std::uint64_t aborted_regex = 0;
  std::uint64_t aborted_uniqueness = 0;
  std::size_t final_vertices = 0;
  std::size_t final_edges = 0;
  double wall_seconds = 0.0;
  bool fixpoint = false;

  std::uint64_t committed() const { return committed_full + committed_partial; }
  std::uint64_t aborted() const { return aborted_regex + aborted_uniqueness; }
  nlohmann::ordered_json to_json() const;
};

struct TrainResult {
  RuleHypergraph graph;
  Ruleset ruleset;
  TrainReport report;
};

/// Called after every committed merge with the updated graph.
using MergeObserver = std::function<void(const RuleHypergraph&)>;

/// Builds the rule graph from the events and merges similar vertices
/// round by round until no candidate pair merges.
TrainResult train(const std::vector<EventRecord>& events, const TypeConfig& types, const TrainConfig& cfg = {},
                  const MergeObserver& observer = {});

}  // namespace rulegraph
