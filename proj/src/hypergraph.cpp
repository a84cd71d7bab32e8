#include "rulegraph/hypergraph.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

void append_u32(std::string& s, std::uint32_t x) {
  s.append(reinterpret_cast<const char*>(&x), sizeof x);
}

void erase_sorted(std::vector<EdgeId>& v, EdgeId e) {
  auto it = std::lower_bound(v.begin(), v.end(), e);
  if (it != v.end() && *it == e) v.erase(it);
}

void insert_sorted(std::vector<EdgeId>& v, EdgeId e) {
  auto it = std::lower_bound(v.begin(), v.end(), e);
  if (it == v.end() || *it != e) v.insert(it, e);
}

}  // namespace

RuleHypergraph RuleHypergraph::build(const std::vector<EventRecord>& events, const TypeConfig& cfg) {
  RuleHypergraph g;
  std::set<SlotKey> slot_set;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].triples.size() < 2)
      throw ValidationError("event " + std::to_string(i) + " has fewer than two entities and cannot form a rule");
    for (const auto& t : events[i].triples) slot_set.emplace(t.key, t.type);
  }
  g.slots_.assign(slot_set.begin(), slot_set.end());
  std::map<SlotKey, SlotId> slot_id;
  for (SlotId s = 0; s < g.slots_.size(); ++s) {
    slot_id.emplace(g.slots_[s], s);
    g.slot_categorical_.push_back(cfg.is_categorical(g.slots_[s].second) ? 1 : 0);
  }
  g.slot_members_.resize(g.slots_.size());
  g.slot_values_.resize(g.slots_.size());

  std::vector<std::map<std::string, Pattern>> values(g.slots_.size());
  for (const auto& e : events)
    for (const auto& t : e.triples) values[slot_id.at({t.key, t.type})].emplace(t.value.text(), t.value);
  for (SlotId s = 0; s < g.slots_.size(); ++s) {
    bool all_literal = true;
    for (auto& [text, p] : values[s]) {
      const VertexId v{static_cast<std::uint32_t>(g.vertices_.size())};
      all_literal = all_literal && p.literal_value().has_value();
      VertexRec r;
      r.slot = s;
      r.value = p;
      r.live = true;
      g.vertices_.push_back(std::move(r));
      g.slot_members_[s].push_back(v);
      g.slot_values_[s].emplace(text, v);
    }
    const auto& mem = g.slot_members_[s];
    for (std::size_t i = 0; i < mem.size(); ++i) {
      auto& ov = g.vertices_[mem[i].value].overlaps;
      for (std::size_t j = 0; j < mem.size(); ++j) {
        if (i == j || (!all_literal && intersects(g.vertices_[mem[i].value].value, g.vertices_[mem[j].value].value)))
          ov.push_back(mem[j]);
      }
    }
  }
  g.live_vertex_count_ = g.vertices_.size();

  std::vector<std::vector<VertexId>> tuples;
  tuples.reserve(events.size());
  for (const auto& e : events) {
    std::vector<VertexId> tup;
    tup.reserve(e.triples.size());
    for (const auto& t : e.triples) {
      const SlotId s = slot_id.at({t.key, t.type});
      tup.push_back(g.slot_values_[s].at(t.value.text()));
    }
    std::sort(tup.begin(), tup.end(),
              [&](VertexId a, VertexId b) { return g.vertices_[a.value].slot < g.vertices_[b.value].slot; });
    tuples.push_back(std::move(tup));
  }
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  for (auto& tup : tuples) {
    std::vector<SlotId> sig;
    for (VertexId v : tup) sig.push_back(g.vertices_[v.value].slot);
    auto [it, fresh] = g.signature_index_.emplace(sig, static_cast<SigId>(g.signatures_.size()));
    if (fresh) g.signatures_.push_back(sig);
    const EdgeId e{static_cast<std::uint32_t>(g.edges_.size())};
    for (VertexId v : tup) g.vertices_[v.value].edges.push_back(e);
    g.tuple_index_.emplace(tup, e);
    g.edges_.push_back({std::move(tup), it->second, 1, true});
    g.index_edge(e);
  }
  g.live_edge_count_ = g.edges_.size();
  return g;
}

const RuleHypergraph::VertexRec& RuleHypergraph::vrec(VertexId v) const {
  if (v.value >= vertices_.size()) throw LookupError("unknown vertex " + std::to_string(v.value));
  return vertices_[v.value];
}

const RuleHypergraph::EdgeRec& RuleHypergraph::erec(EdgeId e) const {
  if (e.value >= edges_.size()) throw LookupError("unknown edge " + std::to_string(e.value));
  return edges_[e.value];
}

std::vector<VertexId> RuleHypergraph::live_vertices(SlotId s) const {
  std::vector<VertexId> out;
  for (VertexId v : slot_members_.at(s))
    if (vertices_[v.value].live) out.push_back(v);
  return out;
}

std::vector<VertexId> RuleHypergraph::live_vertices() const {
  std::vector<VertexId> out;
  for (std::uint32_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].live) out.push_back(VertexId{i});
  return out;
}

SlotId RuleHypergraph::vertex_slot(VertexId v) const { return vrec(v).slot; }
const Pattern& RuleHypergraph::vertex_value(VertexId v) const { return vrec(v).value; }

const std::vector<EdgeId>& RuleHypergraph::hyperedge_neighbors(VertexId v) const {
  const auto& r = vrec(v);
  if (!r.live) throw LookupError("vertex " + std::to_string(v.value) + " is not live");
  return r.edges;
}

std::optional<VertexId> RuleHypergraph::find_vertex(SlotId s, const Pattern& value) const {
  const auto& m = slot_values_.at(s);
  auto it = m.find(value.text());
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::vector<EdgeId> RuleHypergraph::live_edges() const {
  std::vector<EdgeId> out;
  for (std::uint32_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].live) out.push_back(EdgeId{i});
  return out;
}

const std::vector<VertexId>& RuleHypergraph::edge_vertices(EdgeId e) const { return erec(e).verts; }
std::uint64_t RuleHypergraph::edge_support(EdgeId e) const { return erec(e).support; }
SigId RuleHypergraph::edge_signature(EdgeId e) const { return erec(e).sig; }

std::size_t RuleHypergraph::slot_position(EdgeId e, SlotId s) const {
  const auto& verts = edges_[e.value].verts;
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (vertices_[verts[i].value].slot == s) return i;
  throw LookupError("edge has no such slot");
}

std::string RuleHypergraph::masked_key(const std::vector<VertexId>& verts, SigId sig, std::size_t pos) const {
  std::string k;
  k.reserve(4 * (verts.size() + 1));
  append_u32(k, sig);
  append_u32(k, static_cast<std::uint32_t>(pos));
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (i != pos) append_u32(k, verts[i].value);
  return k;
}

void RuleHypergraph::index_edge(EdgeId e) {
  const auto& r = edges_[e.value];
  for (std::size_t pos = 0; pos < r.verts.size(); ++pos) masked_index_[masked_key(r.verts, r.sig, pos)].push_back(e);
}

void RuleHypergraph::check_pair(VertexId v1, VertexId v2) const {
  const auto& a = vrec(v1);
  const auto& b = vrec(v2);
  if (!a.live || !b.live) throw LookupError("merge endpoints must be live vertices");
  if (v1 == v2) throw ValidationError("cannot merge a vertex with itself");
  if (a.slot != b.slot) throw ValidationError("vertices differ in key or type");
}

std::vector<Pattern> RuleHypergraph::negative_examples(VertexId v1, VertexId v2) const {
  check_pair(v1, v2);
  const SlotId s = vertices_[v1.value].slot;
  std::set<VertexId> found;
  for (VertexId v : {v1, v2}) {
    for (EdgeId e : vertices_[v.value].edges) {
      const std::size_t pos = slot_position(e, s);
      const std::string key = masked_key(edges_[e.value].verts, edges_[e.value].sig, pos);
      auto it = masked_index_.find(key);
      if (it == masked_index_.end()) continue;
      for (EdgeId f : it->second) {
        const auto& fr = edges_[f.value];
        if (!fr.live || fr.sig != edges_[e.value].sig) continue;
        if (masked_key(fr.verts, fr.sig, pos) != key) continue;  // stale entry
        const VertexId u = fr.verts[pos];
        if (u != v1 && u != v2) found.insert(u);
      }
    }
  }
  std::vector<Pattern> out;
  for (VertexId u : found) out.push_back(vertices_[u.value].value);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<EdgeId> RuleHypergraph::aligned_subgraph(VertexId v1, VertexId v2) const {
  check_pair(v1, v2);
  const SlotId s = vertices_[v1.value].slot;
  std::set<EdgeId> out;
  for (EdgeId e : vertices_[v1.value].edges) {
    const std::size_t pos = slot_position(e, s);
    const std::string key = masked_key(edges_[e.value].verts, edges_[e.value].sig, pos);
    auto it = masked_index_.find(key);
    if (it == masked_index_.end()) continue;
    for (EdgeId f : it->second) {
      const auto& fr = edges_[f.value];
      if (!fr.live || fr.verts[pos] != v2 || fr.sig != edges_[e.value].sig) continue;
      if (masked_key(fr.verts, fr.sig, pos) != key) continue;
      out.insert(e);
      out.insert(f);
    }
  }
  return {out.begin(), out.end()};
}

bool RuleHypergraph::overlap(VertexId a, VertexId b) const {
  if (a == b) return true;
  const auto& ov = vertices_[a.value].overlaps;
  return std::binary_search(ov.begin(), ov.end(), b);
}

bool RuleHypergraph::tuples_conflict(const std::vector<VertexId>& a, const std::vector<VertexId>& b) const {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (vertices_[a[i].value].slot != vertices_[b[i].value].slot) return false;
    if (!overlap(a[i], b[i])) return false;
  }
  return true;
}

// Live edges that share, at the most selective position, a vertex whose
// language meets the tuple's value there.
std::vector<EdgeId> RuleHypergraph::conflict_candidates(const std::vector<VertexId>& tuple) const {
  std::size_t best = 0, best_cost = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    std::size_t c = 0;
    for (VertexId u : vertices_[tuple[i].value].overlaps)
      if (vertices_[u.value].live) c += vertices_[u.value].edges.size();
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  std::vector<EdgeId> out;
  const VertexId anchor = tuple[best];
  auto take = [&](VertexId u) {
    if (!vertices_[u.value].live) return;
    out.insert(out.end(), vertices_[u.value].edges.begin(), vertices_[u.value].edges.end());
  };
  for (VertexId u : vertices_[anchor.value].overlaps) take(u);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MergeOutcome RuleHypergraph::merge_vertices_full(VertexId v1, VertexId v2, const Pattern& merged) {
  check_pair(v1, v2);
  std::vector<EdgeId> affected = vertices_[v1.value].edges;
  affected.insert(affected.end(), vertices_[v2.value].edges.begin(), vertices_[v2.value].edges.end());
  std::sort(affected.begin(), affected.end());
  return merge_impl(v1, v2, affected, merged);
}

MergeOutcome RuleHypergraph::merge_vertices_partial(VertexId v1, VertexId v2, const std::vector<EdgeId>& subgraph,
                                                    const Pattern& merged) {
  check_pair(v1, v2);
  if (subgraph.empty()) throw ValidationError("partial merge needs a non-empty subgraph");
  std::vector<EdgeId> affected = subgraph;
  std::sort(affected.begin(), affected.end());
  affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
  for (EdgeId e : affected) {
    const auto& n1 = vertices_[v1.value].edges;
    const auto& n2 = vertices_[v2.value].edges;
    if (!std::binary_search(n1.begin(), n1.end(), e) && !std::binary_search(n2.begin(), n2.end(), e))
      throw ValidationError("partial merge subgraph must lie in the neighborhoods of both vertices");
  }
  return merge_impl(v1, v2, affected, merged);
}

MergeOutcome RuleHypergraph::merge_impl(VertexId v1, VertexId v2, const std::vector<EdgeId>& affected,
                                        const Pattern& merged) {
  const SlotId slot = vertices_[v1.value].slot;

  // Target vertex: an existing live vertex with this exact value, else a new one.
  VertexId t;
  bool fresh = false;
  if (auto existing = find_vertex(slot, merged)) {
    t = *existing;
  } else {
    fresh = true;
    t = VertexId{static_cast<std::uint32_t>(vertices_.size())};
    VertexRec r;
    r.slot = slot;
    r.value = merged;
    r.live = false;
    for (VertexId u : slot_members_[slot]) {
      if (!vertices_[u.value].live) continue;
      if (intersects(merged, vertices_[u.value].value)) r.overlaps.push_back(u);
    }
    r.overlaps.push_back(t);
    vertices_.push_back(std::move(r));
    for (VertexId u : vertices_[t.value].overlaps)
      if (u != t) vertices_[u.value].overlaps.push_back(t);
  }
  auto discard_fresh = [&] {
    if (!fresh) return;
    for (VertexId u : vertices_[t.value].overlaps) {
      if (u == t) continue;
      auto& ov = vertices_[u.value].overlaps;
      ov.erase(std::remove(ov.begin(), ov.end(), t), ov.end());
    }
    vertices_[t.value].overlaps.clear();
  };

  // New tuples, grouped.
  std::map<std::vector<VertexId>, std::vector<EdgeId>> groups;
  std::set<EdgeId> affected_set(affected.begin(), affected.end());
  for (EdgeId e : affected) {
    std::vector<VertexId> tup = edges_[e.value].verts;
    for (auto& v : tup)
      if (v == v1 || v == v2) v = t;
    groups[std::move(tup)].push_back(e);
  }

  // Uniqueness of the rewritten edges against the rest of the graph and
  // among themselves.
  for (auto it = groups.begin(); it != groups.end(); ++it) {
    const auto& tup = it->first;
    const SigId sig = edges_[it->second.front().value].sig;
    for (EdgeId f : conflict_candidates(tup)) {
      const auto& fr = edges_[f.value];
      if (!fr.live || affected_set.count(f) || fr.sig != sig || fr.verts == tup) continue;
      if (tuples_conflict(tup, fr.verts)) {
        discard_fresh();
        return {MergeStatus::kUniquenessViolation, {}, 0, 0};
      }
    }
    for (auto jt = std::next(it); jt != groups.end(); ++jt) {
      if (edges_[jt->second.front().value].sig != sig) continue;
      if (tuples_conflict(tup, jt->first)) {
        discard_fresh();
        return {MergeStatus::kUniquenessViolation, {}, 0, 0};
      }
    }
  }

  // Commit.
  if (fresh) {
    vertices_[t.value].live = true;
    slot_members_[slot].push_back(t);
    slot_values_[slot].emplace(merged.text(), t);
    ++live_vertex_count_;
  }
  MergeOutcome out{MergeStatus::kCommitted, t, 0, 0};
  auto kill_edge = [&](EdgeId e) {
    for (VertexId v : edges_[e.value].verts) erase_sorted(vertices_[v.value].edges, e);
    edges_[e.value].live = false;
    --live_edge_count_;
  };
  for (EdgeId e : affected) tuple_index_.erase(edges_[e.value].verts);
  for (auto& [tup, members] : groups) {
    auto existing = tuple_index_.find(tup);
    EdgeId target;
    std::size_t first_absorbed = 0;
    if (existing != tuple_index_.end()) {
      target = existing->second;
    } else {
      target = members.front();
      first_absorbed = 1;
      auto& tr = edges_[target.value];
      for (VertexId v : tr.verts) {
        if (v == v1 || v == v2) erase_sorted(vertices_[v.value].edges, target);
      }
      tr.verts = tup;
      insert_sorted(vertices_[t.value].edges, target);
      tuple_index_.emplace(tup, target);
      index_edge(target);
      ++out.rewritten;
    }
    for (std::size_t i = first_absorbed; i < members.size(); ++i) {
      edges_[target.value].support += edges_[members[i].value].support;
      kill_edge(members[i]);
      ++out.coalesced;
    }
  }
  for (VertexId v : {v1, v2}) {
    if (v == t || !vertices_[v.value].edges.empty()) continue;
    vertices_[v.value].live = false;
    --live_vertex_count_;
    auto& sv = slot_values_[slot];
    auto it = sv.find(vertices_[v.value].value.text());
    if (it != sv.end() && it->second == v) sv.erase(it);
  }
  return out;
}

std::vector<std::pair<EdgeId, EdgeId>> RuleHypergraph::check_edge_uniqueness() const {
  // Recomputes same-slot intersections from scratch rather than trusting
  // the overlap sets maintained by merges.
  std::vector<std::vector<VertexId>> meets(vertices_.size());
  for (SlotId s = 0; s < slots_.size(); ++s) {
    const auto live = live_vertices(s);
    for (std::size_t i = 0; i < live.size(); ++i) {
      meets[live[i].value].push_back(live[i]);
      for (std::size_t j = i + 1; j < live.size(); ++j) {
        if (intersects(vertices_[live[i].value].value, vertices_[live[j].value].value)) {
          meets[live[i].value].push_back(live[j]);
          meets[live[j].value].push_back(live[i]);
        }
      }
    }
  }
  for (auto& m : meets) std::sort(m.begin(), m.end());
  auto meet = [&](VertexId a, VertexId b) { return std::binary_search(meets[a.value].begin(), meets[a.value].end(), b); };

  std::vector<std::pair<EdgeId, EdgeId>> out;
  std::vector<EdgeId> cands;
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& er = edges_[i];
    if (!er.live) continue;
    std::size_t best = 0, best_cost = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < er.verts.size(); ++k) {
      std::size_t c = 0;
      for (VertexId u : meets[er.verts[k].value]) c += vertices_[u.value].edges.size();
      if (c < best_cost) best_cost = c, best = k;
    }
    cands.clear();
    for (VertexId u : meets[er.verts[best].value])
      for (EdgeId f : vertices_[u.value].edges)
        if (f.value > i) cands.push_back(f);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (EdgeId f : cands) {
      const auto& fr = edges_[f.value];
      if (fr.sig != er.sig) continue;
      bool all = true;
      for (std::size_t k = 0; k < er.verts.size() && all; ++k) all = meet(er.verts[k], fr.verts[k]);
      if (all) out.emplace_back(EdgeId{i}, f);
    }
  }
  return out;
}

std::optional<std::string> RuleHypergraph::check_consistency() const {
  std::size_t lv = 0, le = 0;
  std::vector<std::vector<EdgeId>> incid(vertices_.size());
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& er = edges_[i];
    if (!er.live) continue;
    ++le;
    if (er.verts.size() < 2) return "edge " + std::to_string(i) + " has fewer than two vertices";
    for (std::size_t k = 0; k < er.verts.size(); ++k) {
      const auto& vr = vertices_[er.verts[k].value];
      if (!vr.live) return "edge " + std::to_string(i) + " references a dead vertex";
      if (k && vertices_[er.verts[k - 1].value].slot >= vr.slot)
        return "edge " + std::to_string(i) + " is not in slot order";
      incid[er.verts[k].value].push_back(EdgeId{i});
    }
    if (signatures_.at(er.sig).size() != er.verts.size()) return "edge " + std::to_string(i) + " signature mismatch";
    auto it = tuple_index_.find(er.verts);
    if (it == tuple_index_.end() || it->second != EdgeId{i}) return "tuple index misses edge " + std::to_string(i);
  }
  if (tuple_index_.size() != le) return "tuple index has stale entries";
  for (std::uint32_t v = 0; v < vertices_.size(); ++v) {
    const auto& vr = vertices_[v];
    if (!vr.live) continue;
    ++lv;
    if (vr.edges != incid[v]) return "incidence list of vertex " + std::to_string(v) + " is inconsistent";
    if (vr.edges.empty()) return "vertex " + std::to_string(v) + " is isolated";
    for (VertexId u : slot_members_[vr.slot]) {
      if (!vertices_[u.value].live || u.value == v) continue;
      const bool truth = intersects(vr.value, vertices_[u.value].value);
      if (truth != overlap(VertexId{v}, u))
        return "overlap set of vertex " + std::to_string(v) + " disagrees for " + std::to_string(u.value);
    }
  }
  if (lv != live_vertex_count_ || le != live_edge_count_) return "live counters are off";
  return std::nullopt;
}

nlohmann::ordered_json RuleHypergraph::debug_json() const {
  nlohmann::ordered_json j;
  j["slots"] = nlohmann::ordered_json::array();
  for (SlotId s = 0; s < slots_.size(); ++s)
    j["slots"].push_back({{"key", slots_[s].first}, {"type", slots_[s].second}, {"categorical", slot_categorical(s)}});
  j["vertices"] = nlohmann::ordered_json::array();
  for (VertexId v : live_vertices())
    j["vertices"].push_back({{"id", v.value}, {"slot", vertices_[v.value].slot}, {"value", vertices_[v.value].value.text()}});
  j["edges"] = nlohmann::ordered_json::array();
  for (EdgeId e : live_edges()) {
    std::vector<std::uint32_t> vs;
    for (VertexId v : edges_[e.value].verts) vs.push_back(v.value);
    j["edges"].push_back({{"id", e.value}, {"support", edges_[e.value].support}, {"vertices", vs}});
  }
  return j;
}

}  // namespace rulegraph
