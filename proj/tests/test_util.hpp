#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <random>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "rulegraph/event.hpp"
#include "rulegraph/pattern.hpp"
#include "rulegraph/type_config.hpp"

namespace rgtest {

using namespace rulegraph;

// Textbook O(nm) Levenshtein distance, kept separate from the library's.
inline std::size_t levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return d[a.size()][b.size()];
}

// The rendered text is ordinary ECMAScript syntax, so std::regex is an
// independent matcher.
inline bool oracle_match(const Pattern& p, const std::string& s) {
  return std::regex_match(s, std::regex(p.text(), std::regex::ECMAScript));
}

inline std::string random_string(std::mt19937_64& rng, const std::string& alphabet, std::size_t lo, std::size_t hi) {
  std::uniform_int_distribution<std::size_t> len(lo, hi), ch(0, alphabet.size() - 1);
  std::string s(len(rng), ' ');
  for (auto& c : s) c = alphabet[ch(rng)];
  return s;
}

// Small random patterns of one to three units over a narrow alphabet, so
// languages overlap often and stay enumerable.
inline Pattern random_pattern(std::mt19937_64& rng, bool allow_classes = true) {
  static const std::string alphabet = "ab01-";
  static const CharClassId classes[] = {CharClassId::kDigit, CharClassId::kLower, CharClassId::kHex,
                                        CharClassId::kAlnum};
  std::uniform_int_distribution<int> units(1, 3), kind(0, allow_classes ? 2 : 1), coin(0, 1);
  std::vector<RegexUnit> us;
  for (int u = units(rng); u > 0; --u) {
    switch (kind(rng)) {
      case 0:
        us.push_back(LiteralUnion{{random_string(rng, alphabet, 1, 3)}, false});
        break;
      case 1: {
        LiteralUnion lu;
        for (int n = 2 + coin(rng); n > 0; --n) lu.strings.push_back(random_string(rng, alphabet, 1, 3));
        lu.optional = coin(rng) && coin(rng);
        us.push_back(lu);
        break;
      }
      default: {
        RepeatClass rc;
        rc.cls = classes[std::uniform_int_distribution<int>(0, 3)(rng)];
        rc.min = std::uniform_int_distribution<std::uint32_t>(1, 2)(rng);
        rc.max = rc.min + std::uniform_int_distribution<std::uint32_t>(0, 1)(rng);
        rc.optional = coin(rng) && coin(rng);
        us.push_back(rc);
      }
    }
  }
  return Pattern::from_units(std::move(us));
}

// A literal value shaped like a cloud identifier.
inline Pattern random_literal(std::mt19937_64& rng) {
  static const char* prefixes[] = {"i-", "vol-", "sg-", "ab", "user_"};
  std::string s = prefixes[std::uniform_int_distribution<int>(0, 4)(rng)];
  s += random_string(rng, "0123456789", 2, 5);
  return Pattern::literal(s);
}

// Event documents over a few keys: actor names built from templates, a
// categorical operation, resource ids, and sometimes an extra key that
// changes the signature.
inline std::vector<std::string> random_corpus(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  static const std::vector<std::string> services = {"Attr", "Model", "Query", "Index"};
  static const std::vector<std::string> roles = {"Reader", "Writer", "Admin"};
  static const std::vector<std::vector<std::string>> ops = {{"Get", "List"}, {"Put", "Get"}, {"Delete", "Put", "Grant"}};
  std::vector<std::string> actors;
  for (int a = 0; a < 9; ++a) {
    const std::size_t r = static_cast<std::size_t>(a) % roles.size();
    actors.push_back(services[rng() % services.size()] + "-" + roles[r] + "-" + random_string(rng, "ABCDEFGH", 3, 3));
  }
  std::vector<std::string> resources;
  for (int r = 0; r < 6; ++r) resources.push_back("r-" + random_string(rng, "0123456789", 3, 3));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = rng() % actors.size();
    const auto& allowed = ops[a % roles.size()];
    nlohmann::ordered_json e;
    e["actor"] = actors[a];
    e["op"] = allowed[rng() % allowed.size()];
    e["res"] = resources[rng() % resources.size()];
    if (rng() % 5 == 0) e["zone"] = "z" + std::to_string(rng() % 3);
    out.push_back(e.dump());
  }
  return out;
}

inline TypeConfig random_corpus_types() { return TypeConfig().categorical("op"); }

}  // namespace rgtest
