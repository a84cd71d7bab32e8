#include "rulegraph/type_config.hpp"

#include <fnmatch.h>

#include <fstream>

#include "rulegraph/error.hpp"

namespace rulegraph {

bool glob_match(std::string_view glob, std::string_view text) {
  return fnmatch(std::string(glob).c_str(), std::string(text).c_str(), 0) == 0;
}

namespace {

std::vector<std::string> string_list(const nlohmann::ordered_json& j, const char* field) {
  std::vector<std::string> out;
  if (!j.contains(field)) return out;
  const auto& a = j.at(field);
  if (!a.is_array()) throw ValidationError(std::string("type config: '") + field + "' must be an array");
  for (const auto& s : a) {
    if (!s.is_string()) throw ValidationError(std::string("type config: '") + field + "' entries must be strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

void read_types(TypeConfig& cfg, const nlohmann::ordered_json& obj) {
  for (const auto& [glob, type] : obj.items()) {
    if (!type.is_string() || type.get<std::string>().empty())
      throw ValidationError("type config: type for '" + glob + "' must be a non-empty string");
    cfg.assign(glob, type.get<std::string>());
  }
}

}  // namespace

TypeConfig TypeConfig::from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw ValidationError("type config must be a JSON object");
  TypeConfig cfg;
  const bool structured = j.contains("types") || j.contains("default") || j.contains("include") ||
                          j.contains("exclude") || j.contains("categorical");
  if (!structured) {
    read_types(cfg, j);
    return cfg;
  }
  if (j.contains("types")) {
    if (!j.at("types").is_object()) throw ValidationError("type config: 'types' must be an object");
    read_types(cfg, j.at("types"));
  }
  if (j.contains("default")) {
    if (!j.at("default").is_string()) throw ValidationError("type config: 'default' must be a string");
    cfg.set_default(j.at("default").get<std::string>());
  }
  for (auto& g : string_list(j, "include")) cfg.include(std::move(g));
  for (auto& g : string_list(j, "exclude")) cfg.exclude(std::move(g));
  for (auto& t : string_list(j, "categorical")) cfg.categorical(std::move(t));
  return cfg;
}

TypeConfig TypeConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open type config " + path.string());
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("type config " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json TypeConfig::to_json() const {
  nlohmann::ordered_json j;
  j["types"] = nlohmann::ordered_json::object();
  for (const auto& [g, t] : rules_) j["types"][g] = t;
  if (default_) j["default"] = *default_;
  if (!include_.empty()) j["include"] = include_;
  if (!exclude_.empty()) j["exclude"] = exclude_;
  if (!categorical_.empty()) j["categorical"] = std::vector<std::string>(categorical_.begin(), categorical_.end());
  return j;
}

TypeConfig& TypeConfig::assign(std::string glob, std::string type) {
  if (type.empty()) throw ValidationError("semantic type must be non-empty");
  rules_.emplace_back(std::move(glob), std::move(type));
  return *this;
}

TypeConfig& TypeConfig::set_default(std::string type) {
  if (type.empty()) throw ValidationError("semantic type must be non-empty");
  default_ = std::move(type);
  return *this;
}

TypeConfig& TypeConfig::include(std::string glob) {
  include_.push_back(std::move(glob));
  return *this;
}

TypeConfig& TypeConfig::exclude(std::string glob) {
  exclude_.push_back(std::move(glob));
  return *this;
}

TypeConfig& TypeConfig::categorical(std::string type) {
  categorical_.insert(std::move(type));
  return *this;
}

std::string TypeConfig::type_of(std::string_view key) const {
  for (const auto& [g, t] : rules_)
    if (glob_match(g, key)) return t;
  return default_ ? *default_ : std::string(key);
}

bool TypeConfig::keeps(std::string_view key) const {
  if (!include_.empty() &&
      std::none_of(include_.begin(), include_.end(), [&](const std::string& g) { return glob_match(g, key); }))
    return false;
  return std::none_of(exclude_.begin(), exclude_.end(), [&](const std::string& g) { return glob_match(g, key); });
}

bool TypeConfig::is_categorical(std::string_view type) const { return categorical_.find(type) != categorical_.end(); }

}  // namespace rulegraph
