#include "rulegraph/event.hpp"

#include <algorithm>

#include "rulegraph/error.hpp"

namespace rulegraph {

Signature EventRecord::signature() const {
  Signature s;
  s.reserve(triples.size());
  for (const auto& t : triples) s.emplace_back(t.key, t.type);
  std::sort(s.begin(), s.end());
  return s;
}

const Pattern& EventRecord::value_at(std::string_view key, std::string_view type) const {
  auto it = std::lower_bound(triples.begin(), triples.end(), key,
                             [](const EntityTriple& t, std::string_view k) { return t.key < k; });
  if (it == triples.end() || it->key != key || it->type != type)
    throw LookupError("no value for (" + std::string(key) + ", " + std::string(type) + ")");
  return it->value;
}

std::string canonical_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.is_number_unsigned() ? std::to_string(v.get<std::uint64_t>())
                                                           : std::to_string(v.get<std::int64_t>());
  return v.dump();
}

namespace {

void walk(const nlohmann::json& node, std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  auto leaf = [&](std::string value) { out.emplace_back(path, std::move(value)); };
  const std::size_t base = path.size();
  auto child = [&](std::string_view name, const nlohmann::json& v) {
    if (base) path.push_back('.');
    path += name;
    walk(v, path, out);
    path.resize(base);
  };
  if (node.is_object()) {
    if (node.empty()) return leaf("{}");
    for (const auto& [k, v] : node.items()) child(k, v);
  } else if (node.is_array()) {
    if (node.empty()) return leaf("[]");
    for (std::size_t i = 0; i < node.size(); ++i) child(std::to_string(i), node[i]);
  } else {
    leaf(canonical_scalar(node));
  }
}

}  // namespace

const std::optional<std::string>& Flattener::resolve(const std::string& key) {
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  std::optional<std::string> t;
  if (cfg_->keeps(key)) t = cfg_->type_of(key);
  return memo_.emplace(key, std::move(t)).first->second;
}

EventRecord Flattener::flatten(const nlohmann::json& doc) {
  if (!doc.is_object()) throw IngestError("event must be a JSON object");
  if (doc.empty()) throw IngestError("event is an empty object");
  EventRecord rec;
  std::vector<std::pair<std::string, std::string>> leaves;
  std::string path;
  for (const auto& [k, v] : doc.items()) {
    if (k == "_label") {
      const std::string l = v.is_string() ? v.get<std::string>() : std::string{};
      if (l == "normal") rec.label = Label::kNormal;
      else if (l == "anomaly") rec.label = Label::kAnomaly;
      else throw IngestError("_label must be \"normal\" or \"anomaly\"");
      continue;
    }
    path = k;
    walk(v, path, leaves);
  }
  std::sort(leaves.begin(), leaves.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < leaves.size(); ++i)
    if (leaves[i].first == leaves[i - 1].first) throw IngestError("duplicate flattened key '" + leaves[i].first + "'");
  rec.triples.reserve(leaves.size());
  for (auto& [k, v] : leaves) {
    const auto& type = resolve(k);
    if (!type) continue;
    rec.triples.push_back({k, Pattern::literal(v), *type});
  }
  if (rec.triples.empty()) throw IngestError("event has no modeled fields");
  return rec;
}

EventRecord Flattener::parse_line(std::string_view line) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw IngestError(std::string("malformed JSON: ") + e.what());
  }
  return flatten(doc);
}

EventRecord flatten_event(const nlohmann::json& doc, const TypeConfig& cfg) {
  Flattener f(cfg);
  return f.flatten(doc);
}

}  // namespace rulegraph
