#include "rulegraph/similarity.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>

#include "rulegraph/error.hpp"

namespace rulegraph {

void SimParams::validate() const {
  if (!(decay_factor >= 0.0 && decay_factor < 1.0)) throw ValidationError("decay_factor must lie in [0, 1)");
  if (iterations <= 2) throw ValidationError("iterations k must be greater than 2");
  if (!(merge_threshold > 0.0 && merge_threshold <= 1.0)) throw ValidationError("merge_threshold must lie in (0, 1]");
  if (sample_count < 1) throw ValidationError("sample_count must be at least 1");
}

double normalized_levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (a.empty()) return 0.0;
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return static_cast<double>(row[b.size()]) / static_cast<double>(a.size());
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> representatives(const Pattern& p, const SimParams& params) {
  if (auto all = enumerate_words(p, params.sample_count)) return *all;
  return sample_words(p, params.sample_count, fnv1a(p.text()) ^ params.seed);
}

double directed(const std::vector<std::string>& from, const std::vector<std::string>& to) {
  double worst = 0.0;
  for (const auto& s : from) {
    double best = 1.0;
    for (const auto& t : to) {
      best = std::min(best, normalized_levenshtein(s, t));
      if (best == 0.0) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const Pattern& a, const Pattern& b, const SimParams& params) {
  if (a == b && word_count(a) <= params.sample_count) return 0.0;
  const auto wa = representatives(a, params);
  const auto wb = representatives(b, params);
  return std::max(directed(wa, wb), directed(wb, wa));
}

double LabelSimilarity::operator()(const Pattern& a, const Pattern& b) {
  const bool swap = b.text() < a.text();
  const std::string& x = swap ? b.text() : a.text();
  const std::string& y = swap ? a.text() : b.text();
  std::string key;
  key.reserve(x.size() + y.size() + 1);
  key += x;
  key.push_back('\0');
  key += y;
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const double l = std::clamp(1.0 - hausdorff_distance(swap ? b : a, swap ? a : b, params_), 0.0, 1.0);
  memo_.emplace(std::move(key), l);
  return l;
}

double vertex_label(const RuleHypergraph& g, VertexId a, VertexId b, LabelSimilarity& labels) {
  if (a == b) return 1.0;
  const SlotId s = g.vertex_slot(a);
  if (s != g.vertex_slot(b) || g.slot_categorical(s)) return 0.0;
  return labels(g.vertex_value(a), g.vertex_value(b));
}

std::optional<std::size_t> StarExpansion::node_of(VertexId v) const {
  auto it = std::lower_bound(vertex_nodes.begin(), vertex_nodes.end(), v);
  if (it == vertex_nodes.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - vertex_nodes.begin());
}

StarExpansion star_expand(const RuleHypergraph& g) {
  StarExpansion st;
  st.vertex_nodes = g.live_vertices();
  st.edge_nodes = g.live_edges();
  st.adjacency.resize(st.vertex_nodes.size() + st.edge_nodes.size());
  for (std::size_t k = 0; k < st.edge_nodes.size(); ++k) {
    const std::size_t en = st.vertex_nodes.size() + k;
    for (VertexId v : g.edge_vertices(st.edge_nodes[k])) {
      const std::size_t vn = *st.node_of(v);
      st.adjacency[en].push_back(vn);
      st.adjacency[vn].push_back(en);
    }
  }
  for (auto& a : st.adjacency) std::sort(a.begin(), a.end());
  return st;
}

SimilarityMatrix sim_matrix(const RuleHypergraph& g, const SimParams& params, LabelSimilarity& labels) {
  if (params.iterations < 0) throw ValidationError("iteration count must be non-negative");
  if (!(params.decay_factor >= 0.0 && params.decay_factor < 1.0))
    throw ValidationError("decay_factor must lie in [0, 1)");
  SimilarityMatrix m;
  m.star = star_expand(g);
  const auto& st = m.star;
  const std::size_t n = st.size();
  if (n > kDenseNodeLimit) throw ValidationError("graph too large for the dense similarity path");
  const std::size_t nv = st.vertex_nodes.size();

  Eigen::MatrixXd LN = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double l = 0.0;
      if (i < nv && j < nv) l = vertex_label(g, st.vertex_nodes[i], st.vertex_nodes[j], labels);
      else if (i >= nv && j >= nv) l = params.hyperedge_label == HyperedgeLabel::kOne ? 1.0 : 0.0;
      if (l == 0.0) continue;
      LN(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          l / static_cast<double>(st.adjacency[i].size() * st.adjacency[j].size());
    }
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : st.adjacency[i]) trip.emplace_back(static_cast<int>(i), static_cast<int>(j), 1.0);
  Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  A.setFromTriplets(trip.begin(), trip.end());

  m.S = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (int it = 0; it < params.iterations; ++it) {
    Eigen::MatrixXd AS = A * m.S;
    Eigen::MatrixXd M = (A * AS.transpose()).transpose();
    Eigen::MatrixXd next = params.decay_factor * LN.cwiseProduct(M);
    next.diagonal().setOnes();
    m.step_deltas.push_back((next - m.S).cwiseAbs().maxCoeff());
    m.S = std::move(next);
    ++m.iterations;
  }
  return m;
}

double sim_score(const SimilarityMatrix& m, std::size_t i, std::size_t j) {
  if (i >= m.star.size() || j >= m.star.size()) throw LookupError("node index out of range");
  if (m.star.is_edge_node(i) || m.star.is_edge_node(j)) throw ValidationError("SimScore is defined on entity nodes only");
  return m.S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

double sim_score(const SimilarityMatrix& m, VertexId a, VertexId b) {
  auto i = m.star.node_of(a), j = m.star.node_of(b);
  if (!i || !j) throw LookupError("vertex not in similarity snapshot");
  return sim_score(m, *i, *j);
}

VertexSimilarity VertexSimilarity::compute(const RuleHypergraph& g, const SimParams& params, LabelSimilarity& labels) {
  using Index = Eigen::Index;
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  VertexSimilarity out;
  const std::size_t ns = g.num_slots();
  out.slots_.resize(ns);
  std::vector<std::size_t> index_of(g.vertex_capacity(), 0);
  for (SlotId s = 0; s < ns; ++s) {
    auto& sd = out.slots_[s];
    sd.members = g.live_vertices(s);
    sd.active = !g.slot_categorical(s) && sd.members.size() >= 2 && sd.members.size() <= params.max_slot_size;
    for (std::size_t i = 0; i < sd.members.size(); ++i) {
      index_of[sd.members[i].value] = i;
      out.where_[sd.members[i].value] = {s, i};
    }
  }

  // Context weights W[s0][s] (rows: vertices of s0, cols: vertices of s),
  // needed only for scored target slots.
  std::vector<std::vector<std::vector<Eigen::Triplet<double>>>> trips(ns, std::vector<std::vector<Eigen::Triplet<double>>>(ns));
  for (EdgeId e : g.live_edges()) {
    const auto& vs = g.edge_vertices(e);
    const double w = 1.0 / static_cast<double>(vs.size());
    for (VertexId v : vs) {
      const SlotId s0 = g.vertex_slot(v);
      if (!out.slots_[s0].active) continue;
      for (VertexId u : vs)
        trips[s0][g.vertex_slot(u)].emplace_back(static_cast<int>(index_of[v.value]),
                                                 static_cast<int>(index_of[u.value]), w);
    }
  }
  std::vector<std::vector<Sparse>> W(ns, std::vector<Sparse>(ns));
  for (SlotId s0 = 0; s0 < ns; ++s0) {
    if (!out.slots_[s0].active) continue;
    for (SlotId s = 0; s < ns; ++s) {
      if (trips[s0][s].empty()) continue;
      W[s0][s].resize(static_cast<Index>(out.slots_[s0].members.size()), static_cast<Index>(out.slots_[s].members.size()));
      W[s0][s].setFromTriplets(trips[s0][s].begin(), trips[s0][s].end());
    }
  }

  std::vector<Eigen::MatrixXd> L(ns);
  std::vector<Eigen::VectorXd> inv_deg(ns);
  for (SlotId s = 0; s < ns; ++s) {
    auto& sd = out.slots_[s];
    if (!sd.active) continue;
    const Index n = static_cast<Index>(sd.members.size());
    L[s] = Eigen::MatrixXd::Identity(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        L[s](i, j) = L[s](j, i) = vertex_label(g, sd.members[static_cast<std::size_t>(i)],
                                                 sd.members[static_cast<std::size_t>(j)], labels);
    inv_deg[s].resize(n);
    for (Index i = 0; i < n; ++i)
      inv_deg[s](i) = 1.0 / static_cast<double>(g.hyperedge_neighbors(sd.members[static_cast<std::size_t>(i)]).size());
  }

  // V holds entity scores per slot; inactive slots stay at the identity.
  std::vector<Eigen::MatrixXd> V(ns);
  for (SlotId s = 0; s < ns; ++s)
    if (out.slots_[s].active) V[s] = Eigen::MatrixXd::Identity(static_cast<Index>(out.slots_[s].members.size()),
                                                               static_cast<Index>(out.slots_[s].members.size()));
  auto context = [&](SlotId s0, bool include_self) {
    const Index n = static_cast<Index>(out.slots_[s0].members.size());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (SlotId s = 0; s < ns; ++s) {
      if (W[s0][s].nonZeros() == 0 || (!include_self && s == s0)) continue;
      if (out.slots_[s].active) {
        Eigen::MatrixXd WV = W[s0][s] * V[s];
        G.noalias() += (W[s0][s] * WV.transpose()).transpose();
      } else {
        G += Eigen::MatrixXd(W[s0][s] * Sparse(W[s0][s].transpose()));
      }
    }
    return G;
  };
  const double c2 = params.decay_factor * params.decay_factor;
  const int steps = params.iterations / 2;
  std::vector<Eigen::MatrixXd> kernel_ctx(ns);
  for (int step = 0; step < steps; ++step) {
    std::vector<Eigen::MatrixXd> next(ns);
    for (SlotId s0 = 0; s0 < ns; ++s0) {
      if (!out.slots_[s0].active) continue;
      if (step == steps - 1) kernel_ctx[s0] = context(s0, false);
      Eigen::MatrixXd G = context(s0, true);
      Eigen::MatrixXd Vn = c2 * L[s0].cwiseProduct(inv_deg[s0].asDiagonal() * G * inv_deg[s0].asDiagonal());
      Vn.diagonal().setOnes();
      next[s0] = std::move(Vn);
    }
    for (SlotId s0 = 0; s0 < ns; ++s0)
      if (out.slots_[s0].active) V[s0] = std::move(next[s0]);
  }
  for (SlotId s0 = 0; s0 < ns; ++s0) {
    auto& sd = out.slots_[s0];
    if (!sd.active) continue;
    sd.raw = V[s0];
    if (steps == 0) kernel_ctx[s0] = context(s0, false);
    const Eigen::MatrixXd& G = kernel_ctx[s0];
    const Index n = G.rows();
    sd.score = Eigen::MatrixXd::Identity(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double den = std::sqrt(std::max(G(i, i), 0.0) * std::max(G(j, j), 0.0));
        double sc = 0.0;
        if (den > 0.0) sc = std::clamp(L[s0](i, j) * G(i, j) / den, 0.0, 1.0);
        sd.score(i, j) = sd.score(j, i) = sc;
      }
    }
  }
  return out;
}

std::pair<SlotId, std::pair<std::size_t, std::size_t>> VertexSimilarity::locate(VertexId a, VertexId b) const {
  auto ia = where_.find(a.value), ib = where_.find(b.value);
  if (ia == where_.end() || ib == where_.end()) throw LookupError("vertex not in similarity snapshot");
  return {ia->second.first == ib->second.first ? ia->second.first : static_cast<SlotId>(-1),
          {ia->second.second, ib->second.second}};
}

double VertexSimilarity::raw(VertexId a, VertexId b) const {
  auto [s, ij] = locate(a, b);
  if (a == b) return 1.0;
  if (s == static_cast<SlotId>(-1) || !slots_[s].active) return 0.0;
  return slots_[s].raw(static_cast<Eigen::Index>(ij.first), static_cast<Eigen::Index>(ij.second));
}

double VertexSimilarity::score(VertexId a, VertexId b) const {
  auto [s, ij] = locate(a, b);
  if (a == b) return 1.0;
  if (s == static_cast<SlotId>(-1) || !slots_[s].active) return 0.0;
  return slots_[s].score(static_cast<Eigen::Index>(ij.first), static_cast<Eigen::Index>(ij.second));
}

std::vector<ScoredPair> VertexSimilarity::pairs_above(const RuleHypergraph& g, double threshold) const {
  std::vector<ScoredPair> out;
  for (const auto& sd : slots_) {
    if (!sd.active) continue;
    const std::size_t n = sd.members.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double sc = sd.score(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (sc > threshold) out.push_back({sd.members[i], sd.members[j], sc});
      }
  }
  auto key = [&](const ScoredPair& p) {
    const auto& x = g.vertex_value(p.a).text();
    const auto& y = g.vertex_value(p.b).text();
    return x < y ? std::make_pair(x, y) : std::make_pair(y, x);
  };
  std::sort(out.begin(), out.end(), [&](const ScoredPair& p, const ScoredPair& q) {
    if (p.score != q.score) return p.score > q.score;
    const SlotId sp = g.vertex_slot(p.a), sq = g.vertex_slot(q.a);
    if (g.slot_key(sp) != g.slot_key(sq)) return g.slot_key(sp) < g.slot_key(sq);
    return key(p) < key(q);
  });
  return out;
}

}  // namespace rulegraph
