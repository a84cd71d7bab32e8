#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rulegraph/pattern.hpp"

namespace rulegraph {

struct SynthConfig {
  double lambda = kDefaultCostLambda;
  /// Largest language (per side) for which literal unions are offered.
  std::size_t union_bound = 64;
  /// Upper bound on enumerated candidates per request.
  std::size_t candidate_cap = 1024;
};

using AlignedPair = std::pair<Pattern, Pattern>;

/// Splits both patterns into fields at separator characters (- _ / . :)
/// found in plain literal text, and pairs them up. Separators appear as
/// their own aligned pairs. Empty when the separator sequences differ.
std::optional<std::vector<AlignedPair>> split_aligned(const Pattern& r1, const Pattern& r2);

struct ScoredCandidate {
  Pattern pattern;
  CostVector cost;
  double scalar = 0.0;
  bool rejected = false;  // intersects some negative
};

struct SynthResult {
  std::optional<Pattern> winner;
  /// Every enumerated candidate, cheapest first.
  std::vector<ScoredCandidate> candidates;
};

/// Cheapest enumerated pattern covering both inputs that intersects none of
/// the negatives; nothing if every candidate hits a negative.
std::optional<Pattern> merge_regex(const Pattern& r1, const Pattern& r2, const std::vector<Pattern>& negatives,
                                   const SynthConfig& cfg = {});

/// Same search, retaining the scored candidate list.
SynthResult merge_regex_explain(const Pattern& r1, const Pattern& r2, const std::vector<Pattern>& negatives,
                                const SynthConfig& cfg = {});

}  // namespace rulegraph
