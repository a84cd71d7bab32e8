#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rulegraph/event.hpp"
#include "rulegraph/pattern.hpp"
#include "rulegraph/type_config.hpp"

namespace rulegraph {

struct VertexId {
  std::uint32_t value = 0;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

struct EdgeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

using SlotId = std::uint32_t;
using SigId = std::uint32_t;

enum class MergeStatus { kCommitted, kUniquenessViolation };

struct MergeOutcome {
  MergeStatus status = MergeStatus::kCommitted;
  VertexId merged{};       // valid when committed
  std::size_t coalesced = 0;  // edges absorbed into an identical edge
  std::size_t rewritten = 0;  // edges that now reference the merged vertex
};

/// Rule hypergraph: vertices are typed values, hyperedges are rules.
///
/// Construction is canonical. Slots, vertices and edges are numbered in
/// sorted order of their content, so the same event set always yields
/// the same graph regardless of stream order or repetition. Identifiers
/// are never reused; merged-away vertices and absorbed edges stay dead.
class RuleHypergraph {
 public:
  static RuleHypergraph build(const std::vector<EventRecord>& events, const TypeConfig& cfg = {});

  // Slots.
  std::size_t num_slots() const { return slots_.size(); }
  const SlotKey& slot_key(SlotId s) const { return slots_.at(s); }
  bool slot_categorical(SlotId s) const { return slot_categorical_.at(s) != 0; }
  std::vector<VertexId> live_vertices(SlotId s) const;

  // Vertices.
  std::size_t vertex_capacity() const { return vertices_.size(); }
  std::size_t num_live_vertices() const { return live_vertex_count_; }
  std::vector<VertexId> live_vertices() const;
  bool vertex_live(VertexId v) const { return v.value < vertices_.size() && vertices_[v.value].live; }
  SlotId vertex_slot(VertexId v) const;
  const Pattern& vertex_value(VertexId v) const;
  /// Incident live edges, sorted. Throws LookupError for a dead vertex.
  const std::vector<EdgeId>& hyperedge_neighbors(VertexId v) const;
  std::optional<VertexId> find_vertex(SlotId s, const Pattern& value) const;

  // Edges.
  std::size_t edge_capacity() const { return edges_.size(); }
  std::size_t num_live_edges() const { return live_edge_count_; }
  std::vector<EdgeId> live_edges() const;
  bool edge_live(EdgeId e) const { return e.value < edges_.size() && edges_[e.value].live; }
  /// Member vertices in slot order.
  const std::vector<VertexId>& edge_vertices(EdgeId e) const;
  std::uint64_t edge_support(EdgeId e) const;
  SigId edge_signature(EdgeId e) const;
  const std::vector<SlotId>& signature_slots(SigId s) const { return signatures_.at(s); }
  std::size_t num_signatures() const { return signatures_.size(); }

  /// Values at the pair's slot taken from same-signature edges outside both
  /// neighborhoods that agree with some neighborhood edge everywhere else.
  std::vector<Pattern> negative_examples(VertexId v1, VertexId v2) const;

  /// Neighborhood edges of v1 that have a counterpart at v2 agreeing on
  /// every other slot, together with those counterparts.
  std::vector<EdgeId> aligned_subgraph(VertexId v1, VertexId v2) const;

  /// Replaces v1 and v2 by a vertex carrying `merged` in every incident edge.
  /// Identical edges coalesce. If the result would break edge uniqueness
  /// the graph is left untouched.
  MergeOutcome merge_vertices_full(VertexId v1, VertexId v2, const Pattern& merged);

  /// As the full merge, restricted to the edges in `subgraph`.
  MergeOutcome merge_vertices_partial(VertexId v1, VertexId v2, const std::vector<EdgeId>& subgraph,
                                      const Pattern& merged);

  /// Pairs of live edges with equal signatures whose values intersect on
  /// every slot. Empty iff no concrete event can match two edges.
  std::vector<std::pair<EdgeId, EdgeId>> check_edge_uniqueness() const;

  /// Cross-checks incidence lists, the tuple index and overlap sets against
  /// a from-scratch recomputation. Returns a description of the first
  /// inconsistency, or nothing.
  std::optional<std::string> check_consistency() const;

  nlohmann::ordered_json debug_json() const;

 private:
  struct VertexRec {
    SlotId slot = 0;
    Pattern value;
    std::vector<EdgeId> edges;
    std::vector<VertexId> overlaps;  // same-slot vertices with intersecting language, self included
    bool live = false;
  };
  struct EdgeRec {
    std::vector<VertexId> verts;
    SigId sig = 0;
    std::uint64_t support = 0;
    bool live = false;
  };

  const VertexRec& vrec(VertexId v) const;
  const EdgeRec& erec(EdgeId e) const;
  std::size_t slot_position(EdgeId e, SlotId s) const;
  std::string masked_key(const std::vector<VertexId>& verts, SigId sig, std::size_t pos) const;
  void index_edge(EdgeId e);
  bool overlap(VertexId a, VertexId b) const;
  bool tuples_conflict(const std::vector<VertexId>& a, const std::vector<VertexId>& b) const;
  std::vector<EdgeId> conflict_candidates(const std::vector<VertexId>& tuple) const;
  MergeOutcome merge_impl(VertexId v1, VertexId v2, const std::vector<EdgeId>& affected, const Pattern& merged);
  void check_pair(VertexId v1, VertexId v2) const;

  std::vector<SlotKey> slots_;
  std::vector<char> slot_categorical_;
  std::vector<std::vector<VertexId>> slot_members_;
  std::vector<std::unordered_map<std::string, VertexId>> slot_values_;  // live vertices by rendered value
  std::vector<std::vector<SlotId>> signatures_;
  std::map<std::vector<SlotId>, SigId> signature_index_;
  std::vector<VertexRec> vertices_;
  std::vector<EdgeRec> edges_;
  std::map<std::vector<VertexId>, EdgeId> tuple_index_;
  std::unordered_map<std::string, std::vector<EdgeId>> masked_index_;
  std::size_t live_vertex_count_ = 0;
  std::size_t live_edge_count_ = 0;
};

}  // namespace rulegraph
