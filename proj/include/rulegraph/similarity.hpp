#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "rulegraph/hypergraph.hpp"
#include "rulegraph/pattern.hpp"

namespace rulegraph {

/// Label between two distinct hyperedge nodes of the star expansion.
/// `kOne` lets structure flow through shared contexts; `kZero` cuts every
/// path and collapses S to the identity.
enum class HyperedgeLabel { kOne, kZero };

struct SimParams {
  double decay_factor = 0.8;
  int iterations = 4;
  double merge_threshold = 0.65;
  std::size_t sample_count = 32;
  std::uint64_t seed = 0;
  HyperedgeLabel hyperedge_label = HyperedgeLabel::kOne;
  /// Slots with more live vertices are not scored (kept at identity).
  std::size_t max_slot_size = 3000;

  /// Throws ValidationError when out of range.
  void validate() const;
};

/// Levenshtein distance divided by the longer length; 0 for two empty strings.
double normalized_levenshtein(std::string_view a, std::string_view b);

/// Hausdorff distance between the two languages under normalized
/// Levenshtein. Small languages (at most `sample_count` words) are
/// enumerated; larger ones are sampled with a seed derived from the
/// pattern text, so the result is symmetric and reproducible.
double hausdorff_distance(const Pattern& a, const Pattern& b, const SimParams& params);

/// Memoized 1 - hausdorff_distance for values of one slot.
class LabelSimilarity {
 public:
  explicit LabelSimilarity(SimParams params) : params_(params) {}
  double operator()(const Pattern& a, const Pattern& b);

 private:
  SimParams params_;
  std::unordered_map<std::string, double> memo_;
};

/// Label similarity between two vertices: 1 on the diagonal, 0 across
/// slots or between distinct values of a categorical slot.
double vertex_label(const RuleHypergraph& g, VertexId a, VertexId b, LabelSimilarity& labels);

/// Bipartite star expansion: one node per live vertex, then one per live edge.
struct StarExpansion {
  std::vector<VertexId> vertex_nodes;
  std::vector<EdgeId> edge_nodes;
  std::vector<std::vector<std::size_t>> adjacency;

  std::size_t size() const { return adjacency.size(); }
  bool is_edge_node(std::size_t i) const { return i >= vertex_nodes.size(); }
  std::optional<std::size_t> node_of(VertexId v) const;
};

StarExpansion star_expand(const RuleHypergraph& g);

/// The iterated matrix over the star expansion.
struct SimilarityMatrix {
  StarExpansion star;
  Eigen::MatrixXd S;
  int iterations = 0;
  /// max |S_{n+1} - S_n| for each step taken.
  std::vector<double> step_deltas;
};

inline constexpr std::size_t kDenseNodeLimit = 2000;

/// Dense iteration S <- I + c * L o N o (A S A), k steps from the identity.
/// Throws ValidationError above kDenseNodeLimit star nodes.
SimilarityMatrix sim_matrix(const RuleHypergraph& g, const SimParams& params, LabelSimilarity& labels);

/// Entry of S for two entity nodes; throws for hyperedge nodes.
double sim_score(const SimilarityMatrix& m, std::size_t i, std::size_t j);
double sim_score(const SimilarityMatrix& m, VertexId a, VertexId b);

struct ScoredPair {
  VertexId a;
  VertexId b;
  double score = 0.0;
};

/// Vertex-level similarity computed slot by slot.
///
/// Entity scores of the star iteration only depend on entity scores two
/// steps earlier, through per-slot context weights w(v, s)[u] = sum of
/// 1/arity over edges holding v that carry u at slot s. This evaluates
/// the same S_k on entity pairs with one small dense matrix per slot.
///
/// `score` is the thresholded quantity: the pair's label times the
/// cosine between the two vertices' contexts on the other slots, under
/// the kernel S_{k-2}. Vertices with identical surroundings score their
/// label; vertices with unrelated surroundings score near 0.
class VertexSimilarity {
 public:
  static VertexSimilarity compute(const RuleHypergraph& g, const SimParams& params, LabelSimilarity& labels);

  /// S_k entry. Throws LookupError for vertices not in the snapshot.
  double raw(VertexId a, VertexId b) const;
  double score(VertexId a, VertexId b) const;
  bool scored_slot(SlotId s) const { return slots_.at(s).active; }

  /// Same-slot pairs with score strictly above the threshold, best first;
  /// ties broken by rendered values.
  std::vector<ScoredPair> pairs_above(const RuleHypergraph& g, double threshold) const;

 private:
  struct SlotData {
    std::vector<VertexId> members;
    bool active = false;
    Eigen::MatrixXd raw;
    Eigen::MatrixXd score;
  };
  std::pair<SlotId, std::pair<std::size_t, std::size_t>> locate(VertexId a, VertexId b) const;

  std::vector<SlotData> slots_;
  std::unordered_map<std::uint32_t, std::pair<SlotId, std::size_t>> where_;
};

}  // namespace rulegraph
