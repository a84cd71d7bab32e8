#include "rulegraph/trainer.hpp"

#include <chrono>
#include <set>

#include "rulegraph/error.hpp"

namespace rulegraph {

void TrainConfig::validate() const {
  sim.validate();
  if (max_outer_iterations < 1) throw ValidationError("max_outer_iterations must be positive");
  if (pair_cap < 1) throw ValidationError("pair_cap must be positive");
  if (synth.candidate_cap < 1) throw ValidationError("candidate cap must be positive");
}

nlohmann::ordered_json TrainReport::to_json() const {
  return {{"rounds", rounds},
          {"attempted", attempted},
          {"committed", committed()},
          {"committed_full", committed_full},
          {"committed_partial", committed_partial},
          {"aborted_regex", aborted_regex},
          {"aborted_uniqueness", aborted_uniqueness},
          {"final_vertices", final_vertices},
          {"final_edges", final_edges},
          {"wall_seconds", wall_seconds},
          {"fixpoint", fixpoint}};
}

TrainResult train(const std::vector<EventRecord>& events, const TypeConfig& types, const TrainConfig& cfg,
                  const MergeObserver& observer) {
  cfg.validate();
  if (events.empty()) throw ValidationError("training needs at least one event");
  const auto t0 = std::chrono::steady_clock::now();
  TrainResult res{RuleHypergraph::build(events, types), {}, {}};
  auto& g = res.graph;
  auto& rep = res.report;
  LabelSimilarity labels(cfg.sim);

  for (int round = 0; round < cfg.max_outer_iterations; ++round) {
    ++rep.rounds;
    const auto sim = VertexSimilarity::compute(g, cfg.sim, labels);
    auto pairs = sim.pairs_above(g, cfg.sim.merge_threshold);
    if (pairs.size() > cfg.pair_cap) pairs.resize(cfg.pair_cap);
    std::set<VertexId> touched;
    std::uint64_t commits = 0;
    for (const auto& [a, b, score] : pairs) {
      // Scores are stale for anything rewritten earlier this round.
      if (!g.vertex_live(a) || !g.vertex_live(b) || touched.count(a) || touched.count(b)) continue;
      ++rep.attempted;
      const auto negatives = g.negative_examples(a, b);
      const auto merged = merge_regex(g.vertex_value(a), g.vertex_value(b), negatives, cfg.synth);
      if (!merged) {
        ++rep.aborted_regex;
        continue;
      }
      auto out = g.merge_vertices_full(a, b, *merged);
      if (out.status == MergeStatus::kCommitted) {
        ++rep.committed_full;
      } else {
        const auto sub = g.aligned_subgraph(a, b);
        if (!sub.empty()) out = g.merge_vertices_partial(a, b, sub, *merged);
        if (out.status != MergeStatus::kCommitted) {
          ++rep.aborted_uniqueness;
          continue;
        }
        ++rep.committed_partial;
      }
      ++commits;
      touched.insert(a);
      touched.insert(b);
      touched.insert(out.merged);
      if (observer) observer(g);
    }
    if (commits == 0) {
      rep.fixpoint = true;
      break;
    }
  }
  rep.final_vertices = g.num_live_vertices();
  rep.final_edges = g.num_live_edges();
  res.ruleset = Ruleset::from_graph(g, types);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace rulegraph
