#include "rulegraph/ruleset.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "rulegraph/error.hpp"

namespace rulegraph {

Ruleset::Ruleset(std::vector<Rule> rules, TypeConfig types) : rules_(std::move(rules)), types_(std::move(types)) {
  canonicalize();
}

void Ruleset::canonicalize() {
  for (auto& r : rules_) {
    if (r.signature.size() != r.patterns.size()) throw ValidationError("rule signature and patterns differ in size");
    std::vector<std::size_t> order(r.signature.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.signature[a] < r.signature[b]; });
    Signature sig;
    std::vector<Pattern> pats;
    for (std::size_t i : order) {
      sig.push_back(r.signature[i]);
      pats.push_back(r.patterns[i]);
    }
    for (std::size_t i = 1; i < sig.size(); ++i)
      if (sig[i].first == sig[i - 1].first) throw ValidationError("rule repeats key '" + sig[i].first + "'");
    r.signature = std::move(sig);
    r.patterns = std::move(pats);
  }
  std::sort(rules_.begin(), rules_.end(), [](const Rule& a, const Rule& b) {
    if (a.signature != b.signature) return a.signature < b.signature;
    if (a.support != b.support) return a.support > b.support;
    return std::lexicographical_compare(a.patterns.begin(), a.patterns.end(), b.patterns.begin(), b.patterns.end(),
                                        [](const Pattern& x, const Pattern& y) { return x.text() < y.text(); });
  });
  buckets_.clear();
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    rules_[i].id = "r" + std::to_string(i);
    buckets_[rules_[i].signature].push_back(i);
  }
}

Ruleset Ruleset::from_graph(const RuleHypergraph& g, const TypeConfig& types) {
  std::vector<Rule> rules;
  for (EdgeId e : g.live_edges()) {
    Rule r;
    r.support = g.edge_support(e);
    for (VertexId v : g.edge_vertices(e)) {
      r.signature.push_back(g.slot_key(g.vertex_slot(v)));
      r.patterns.push_back(g.vertex_value(v));
    }
    rules.push_back(std::move(r));
  }
  return Ruleset(std::move(rules), types);
}

nlohmann::ordered_json Ruleset::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["type_config"] = types_.to_json();
  j["rules"] = nlohmann::ordered_json::array();
  for (const auto& r : rules_) {
    nlohmann::ordered_json jr;
    jr["id"] = r.id;
    jr["support"] = r.support;
    jr["signature"] = nlohmann::ordered_json::array();
    jr["patterns"] = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.signature.size(); ++i) {
      jr["signature"].push_back({r.signature[i].first, r.signature[i].second});
      jr["patterns"][r.signature[i].first] = r.patterns[i].text();
    }
    j["rules"].push_back(std::move(jr));
  }
  return j;
}

std::string Ruleset::dump() const { return to_json().dump(2) + "\n"; }

Ruleset Ruleset::from_json(const nlohmann::ordered_json& j) {
  try {
    if (!j.is_object()) throw ValidationError("ruleset must be a JSON object");
    if (j.value("version", 0) != kVersion) throw ValidationError("unsupported ruleset version");
    TypeConfig types;
    if (j.contains("type_config")) types = TypeConfig::from_json(j.at("type_config"));
    std::vector<Rule> rules;
    for (const auto& jr : j.at("rules")) {
      Rule r;
      r.support = jr.value("support", std::uint64_t{0});
      for (const auto& kt : jr.at("signature")) {
        if (!kt.is_array() || kt.size() != 2) throw ValidationError("signature entries must be [key, type]");
        const auto key = kt[0].get<std::string>();
        r.signature.emplace_back(key, kt[1].get<std::string>());
        if (!jr.at("patterns").contains(key)) throw ValidationError("rule lacks a pattern for '" + key + "'");
        r.patterns.push_back(parse(jr.at("patterns").at(key).get<std::string>()));
      }
      if (jr.at("patterns").size() != r.signature.size()) throw ValidationError("rule has patterns outside its signature");
      rules.push_back(std::move(r));
    }
    return Ruleset(std::move(rules), std::move(types));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed ruleset: ") + e.what());
  } catch (const ParseError& e) {
    throw ValidationError(std::string("malformed ruleset: ") + e.what());
  }
}

Ruleset Ruleset::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open ruleset " + path.string());
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("ruleset " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

void Ruleset::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write ruleset " + path.string());
  out << dump();
}

std::vector<std::pair<std::string, std::string>> validate_ruleset(const Ruleset& rs) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto& rules = rs.rules();
  for (const auto& [sig, members] : rs.buckets()) {
    const std::size_t np = sig.size();
    // Per position: distinct patterns, the rules carrying each, and which
    // distinct patterns intersect.
    std::vector<std::vector<std::size_t>> pat_of(np, std::vector<std::size_t>(members.size()));
    std::vector<std::vector<std::vector<std::size_t>>> carriers(np);
    std::vector<std::vector<std::vector<std::size_t>>> meets(np);
    for (std::size_t p = 0; p < np; ++p) {
      std::unordered_map<std::string, std::size_t> idx;
      std::vector<const Pattern*> distinct;
      for (std::size_t m = 0; m < members.size(); ++m) {
        const Pattern& pat = rules[members[m]].patterns[p];
        auto [it, fresh] = idx.emplace(pat.text(), distinct.size());
        if (fresh) {
          distinct.push_back(&pat);
          carriers[p].emplace_back();
        }
        pat_of[p][m] = it->second;
        carriers[p][it->second].push_back(m);
      }
      meets[p].assign(distinct.size(), {});
      for (std::size_t a = 0; a < distinct.size(); ++a) {
        meets[p][a].push_back(a);
        if (distinct[a]->literal_value()) continue;
        for (std::size_t b = 0; b < distinct.size(); ++b) {
          if (a == b) continue;
          if (intersects(*distinct[a], *distinct[b])) {
            meets[p][a].push_back(b);
            if (distinct[b]->literal_value()) meets[p][b].push_back(a);
          }
        }
      }
      for (auto& m : meets[p]) {
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
      }
    }
    std::vector<std::size_t> cands;
    for (std::size_t m = 0; m < members.size(); ++m) {
      std::size_t best = 0, best_cost = std::numeric_limits<std::size_t>::max();
      for (std::size_t p = 0; p < np; ++p) {
        std::size_t c = 0;
        for (std::size_t d : meets[p][pat_of[p][m]]) c += carriers[p][d].size();
        if (c < best_cost) best_cost = c, best = p;
      }
      cands.clear();
      for (std::size_t d : meets[best][pat_of[best][m]])
        for (std::size_t o : carriers[best][d])
          if (o > m) cands.push_back(o);
      std::sort(cands.begin(), cands.end());
      for (std::size_t o : cands) {
        bool all = true;
        for (std::size_t p = 0; p < np && all; ++p) {
          const auto& ms = meets[p][pat_of[p][m]];
          all = std::binary_search(ms.begin(), ms.end(), pat_of[p][o]);
        }
        if (all) out.emplace_back(rules[members[m]].id, rules[members[o]].id);
      }
    }
  }
  return out;
}

}  // namespace rulegraph
