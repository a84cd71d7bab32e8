#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rulegraph/event.hpp"
#include "rulegraph/hypergraph.hpp"
#include "rulegraph/pattern.hpp"
#include "rulegraph/type_config.hpp"

namespace rulegraph {

struct Rule {
  std::string id;
  std::uint64_t support = 0;
  Signature signature;
  /// One pattern per signature slot, in signature order.
  std::vector<Pattern> patterns;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Serialized hyperedges, grouped by signature.
///
/// Rules are kept in canonical order (signature, then descending support,
/// then pattern text) and numbered r0, r1, ... in that order, so equal
/// graphs always serialize to identical bytes.
class Ruleset {
 public:
  static constexpr int kVersion = 1;

  Ruleset() = default;
  Ruleset(std::vector<Rule> rules, TypeConfig types);

  static Ruleset from_graph(const RuleHypergraph& g, const TypeConfig& types);
  static Ruleset from_json(const nlohmann::ordered_json& j);
  static Ruleset load(const std::filesystem::path& path);

  nlohmann::ordered_json to_json() const;
  /// Canonical serialization (two-space indented JSON).
  std::string dump() const;
  void save(const std::filesystem::path& path) const;

  const std::vector<Rule>& rules() const { return rules_; }
  const TypeConfig& types() const { return types_; }
  /// Rule indices per signature, in scan order.
  const std::map<Signature, std::vector<std::size_t>>& buckets() const { return buckets_; }

 private:
  void canonicalize();

  std::vector<Rule> rules_;
  TypeConfig types_;
  std::map<Signature, std::vector<std::size_t>> buckets_;
};

/// Pairs of rule ids in one signature bucket whose patterns intersect on
/// every slot, i.e. some event would match both.
std::vector<std::pair<std::string, std::string>> validate_ruleset(const Ruleset& rs);

}  // namespace rulegraph
