#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rulegraph/charclass.hpp"

namespace rulegraph {

using BigCount = boost::multiprecision::cpp_int;

/// A union of literal strings, `(?:a|b|c)`; a single string renders bare.
/// `optional` adds the empty word.
struct LiteralUnion {
  std::vector<std::string> strings;
  bool optional = false;

  friend bool operator==(const LiteralUnion&, const LiteralUnion&) = default;
};

/// `class{min,max}`, with 1 <= min <= max. `optional` adds the empty word;
/// a zero minimum is always expressed through it.
struct RepeatClass {
  CharClassId cls = CharClassId::kPrintable;
  std::uint32_t min = 1;
  std::uint32_t max = 1;
  bool optional = false;

  friend bool operator==(const RepeatClass&, const RepeatClass&) = default;
};

using RegexUnit = std::variant<LiteralUnion, RepeatClass>;

/// A concatenation of regex units. Immutable after construction.
///
/// Units are normalized on construction: union strings are sorted and
/// deduplicated, an empty string inside a union becomes the optional flag,
/// a zero repeat minimum becomes an optional repeat, and adjacent single
/// literals are fused. The pattern with no units denotes the empty string.
class Pattern {
 public:
  Pattern() = default;

  static Pattern literal(std::string_view s);
  static Pattern from_units(std::vector<RegexUnit> units);

  const std::vector<RegexUnit>& units() const { return units_; }

  /// The canonical regex text; equal patterns render identically.
  const std::string& text() const { return text_; }

  /// The single accepted word, if the language is one concrete string.
  std::optional<std::string_view> literal_value() const;

  friend bool operator==(const Pattern& a, const Pattern& b) { return a.text_ == b.text_; }
  friend auto operator<=>(const Pattern& a, const Pattern& b) { return a.text_ <=> b.text_; }

 private:
  std::vector<RegexUnit> units_;
  std::string text_;
};

/// Heuristic cost of a pattern: AST size and log of the language size.
struct CostVector {
  std::size_t node_count = 0;
  double log_word_count = 0.0;

  double scalar(double lambda) const { return static_cast<double>(node_count) + lambda * log_word_count; }
};

inline constexpr double kDefaultCostLambda = 0.5;

// Per-unit facts.
BigCount unit_word_count(const RegexUnit& u);
double unit_log_word_count(const RegexUnit& u);
std::size_t unit_node_count(const RegexUnit& u);
std::size_t unit_min_length(const RegexUnit& u);
std::size_t unit_max_length(const RegexUnit& u);
ByteSet unit_chars(const RegexUnit& u);
bool unit_is_literal_only(const RegexUnit& u);

/// Anchored full-string membership.
bool matches(const Pattern& p, std::string_view s);

/// Product over units of per-unit counts. Equals |L(p)| whenever the
/// concatenation is unambiguous, and bounds it from above otherwise.
BigCount word_count(const Pattern& p);
double log_word_count(const Pattern& p);
std::size_t node_count(const Pattern& p);
CostVector cost(const Pattern& p);

/// Total order used to rank synthesis candidates: scalar cost, then
/// smaller language, then rendered text.
bool cost_less(const Pattern& a, const Pattern& b, double lambda = kDefaultCostLambda);

std::size_t min_length(const Pattern& p);
std::size_t max_length(const Pattern& p);
ByteSet possible_chars(const Pattern& p);

/// `n` words drawn unit by unit (uniform string or uniform length then
/// uniform characters). Deterministic for a given seed.
std::vector<std::string> sample_words(const Pattern& p, std::size_t n, std::uint64_t seed);

/// All distinct words in sorted order, or nothing if the language (as
/// counted by `word_count`) exceeds `limit`.
std::optional<std::vector<std::string>> enumerate_words(const Pattern& p, std::size_t limit);

/// Non-empty intersection test by product construction over the two
/// (acyclic) unit automata.
bool intersects(const Pattern& a, const Pattern& b);

/// Least inventory class covering every character, lengths spanning the
/// shortest and longest string. Empty when a character is outside the
/// inventory (non-ASCII or control bytes).
std::optional<RepeatClass> generalize_literals_to_rc(const LiteralUnion& u);

/// Least repeat class whose language contains both inputs.
RepeatClass merge_rc(const RepeatClass& a, const RepeatClass& b);

Pattern parse(std::string_view text);
inline std::string render(const Pattern& p) { return p.text(); }

std::string render_unit(const RegexUnit& u);
std::string escape_literal(std::string_view s);

/// Pattern compiled for repeated matching; literal patterns short-circuit
/// to string comparison.
class CompiledPattern {
 public:
  CompiledPattern() = default;
  explicit CompiledPattern(Pattern p);

  bool operator()(std::string_view s) const;
  const Pattern& pattern() const { return pattern_; }

 private:
  Pattern pattern_;
  std::optional<std::string> literal_;
};

}  // namespace rulegraph
