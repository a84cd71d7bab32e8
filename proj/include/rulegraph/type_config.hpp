#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace rulegraph {

/// Assigns a semantic type to every flattened key path.
///
/// Accepted JSON forms: a plain object `{glob: type, ...}` (in document
/// order), or `{"types": {...}, "default": type, "include": [globs],
/// "exclude": [globs], "categorical": [types]}`. Globs use shell syntax
/// and the first match wins; without a default a key is its own type.
class TypeConfig {
 public:
  TypeConfig() = default;

  static TypeConfig from_json(const nlohmann::ordered_json& j);
  static TypeConfig load(const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;

  TypeConfig& assign(std::string glob, std::string type);
  TypeConfig& set_default(std::string type);
  TypeConfig& include(std::string glob);
  TypeConfig& exclude(std::string glob);
  TypeConfig& categorical(std::string type);

  std::string type_of(std::string_view key) const;
  /// Whether the key is modeled at all (include list, minus excludes).
  bool keeps(std::string_view key) const;
  /// Distinct values of a categorical type are never generalized.
  bool is_categorical(std::string_view type) const;

  friend bool operator==(const TypeConfig&, const TypeConfig&) = default;

 private:
  std::vector<std::pair<std::string, std::string>> rules_;
  std::optional<std::string> default_;
  std::vector<std::string> include_;
  std::vector<std::string> exclude_;
  std::set<std::string, std::less<>> categorical_;
};

bool glob_match(std::string_view glob, std::string_view text);

}  // namespace rulegraph
