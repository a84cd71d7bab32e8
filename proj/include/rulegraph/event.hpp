#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rulegraph/pattern.hpp"
#include "rulegraph/type_config.hpp"

namespace rulegraph {

/// (key path, semantic type): one column of an event or rule.
using SlotKey = std::pair<std::string, std::string>;

/// Sorted, duplicate-free set of slots.
using Signature = std::vector<SlotKey>;

struct EntityTriple {
  std::string key;
  Pattern value;
  std::string type;

  friend bool operator==(const EntityTriple&, const EntityTriple&) = default;
};

enum class Label { kNormal, kAnomaly };

struct EventRecord {
  /// Sorted by key; keys are unique.
  std::vector<EntityTriple> triples;
  std::optional<Label> label;

  Signature signature() const;
  /// Throws LookupError when the slot is absent.
  const Pattern& value_at(std::string_view key, std::string_view type) const;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

inline Signature signature(const EventRecord& e) { return e.signature(); }

/// Flattens documents with a memo of per-key type decisions. Not thread-safe;
/// use one per worker.
class Flattener {
 public:
  explicit Flattener(const TypeConfig& cfg) : cfg_(&cfg) {}

  EventRecord flatten(const nlohmann::json& doc);
  /// Parses one JSON Lines record. Throws IngestError on malformed input.
  EventRecord parse_line(std::string_view line);

 private:
  const std::optional<std::string>& resolve(const std::string& key);

  const TypeConfig* cfg_;
  std::unordered_map<std::string, std::optional<std::string>> memo_;
};

EventRecord flatten_event(const nlohmann::json& doc, const TypeConfig& cfg);

/// Canonical text for a scalar leaf: strings verbatim, booleans as
/// true/false, integers in base 10, other numbers as JSON.
std::string canonical_scalar(const nlohmann::json& v);

}  // namespace rulegraph
