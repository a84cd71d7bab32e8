#include "rulegraph/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

bool is_single_literal(const RegexUnit& u) {
  const auto* lu = std::get_if<LiteralUnion>(&u);
  return lu && !lu->optional && lu->strings.size() == 1;
}

// Returns false when the unit denotes only the empty word and can be dropped.
bool normalize_unit(RegexUnit& u) {
  return std::visit(Overloaded{
                        [](LiteralUnion& lu) {
                          std::sort(lu.strings.begin(), lu.strings.end());
                          lu.strings.erase(std::unique(lu.strings.begin(), lu.strings.end()), lu.strings.end());
                          if (!lu.strings.empty() && lu.strings.front().empty()) {
                            lu.strings.erase(lu.strings.begin());
                            lu.optional = true;
                          }
                          if (lu.strings.empty() && !lu.optional)
                            throw ValidationError("literal union with no strings");
                          return !lu.strings.empty();
                        },
                        [](RepeatClass& rc) {
                          if (rc.min > rc.max) throw ValidationError("repeat minimum exceeds maximum");
                          if (rc.max == 0) return false;
                          if (rc.min == 0) {
                            rc.min = 1;
                            rc.optional = true;
                          }
                          return true;
                        },
                    },
                    u);
}

}  // namespace

std::string escape_literal(std::string_view s) {
  static constexpr std::string_view kMeta = "\\.^$|?*+()[]{}";
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (kMeta.find(ch) != std::string_view::npos) {
      out.push_back('\\');
      out.push_back(ch);
    } else if (c < 0x20 || c > 0x7e) {
      out += "\\x";
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    } else {
      out.push_back(ch);
    }
  }
  return out;
}

std::string render_unit(const RegexUnit& u) {
  return std::visit(Overloaded{
                        [](const LiteralUnion& lu) {
                          if (lu.strings.size() == 1 && !lu.optional) return escape_literal(lu.strings[0]);
                          std::string out = "(?:";
                          for (std::size_t i = 0; i < lu.strings.size(); ++i) {
                            if (i) out.push_back('|');
                            out += escape_literal(lu.strings[i]);
                          }
                          out.push_back(')');
                          if (lu.optional) out.push_back('?');
                          return out;
                        },
                        [](const RepeatClass& rc) {
                          std::string out(class_bracket(rc.cls));
                          out += "{" + std::to_string(rc.min) + "," + std::to_string(rc.max) + "}";
                          if (rc.optional) out = "(?:" + out + ")?";
                          return out;
                        },
                    },
                    u);
}

Pattern Pattern::literal(std::string_view s) {
  if (s.empty()) return Pattern{};
  return from_units({LiteralUnion{{std::string(s)}, false}});
}

Pattern Pattern::from_units(std::vector<RegexUnit> units) {
  Pattern p;
  for (auto& u : units) {
    if (!normalize_unit(u)) continue;
    if (!p.units_.empty() && is_single_literal(u) && is_single_literal(p.units_.back())) {
      std::get<LiteralUnion>(p.units_.back()).strings[0] += std::get<LiteralUnion>(u).strings[0];
      continue;
    }
    p.units_.push_back(std::move(u));
  }
  for (const auto& u : p.units_) p.text_ += render_unit(u);
  return p;
}

std::optional<std::string_view> Pattern::literal_value() const {
  if (units_.empty()) return std::string_view{};
  if (units_.size() == 1 && is_single_literal(units_[0])) return std::get<LiteralUnion>(units_[0]).strings[0];
  return std::nullopt;
}

BigCount unit_word_count(const RegexUnit& u) {
  return std::visit(Overloaded{
                        [](const LiteralUnion& lu) -> BigCount { return BigCount(lu.strings.size() + (lu.optional ? 1 : 0)); },
                        [](const RepeatClass& rc) -> BigCount {
                          const BigCount s(class_size(rc.cls));
                          BigCount total = 0;
                          BigCount pw = boost::multiprecision::pow(s, rc.min);
                          for (std::uint32_t l = rc.min; l <= rc.max; ++l) {
                            total += pw;
                            pw *= s;
                          }
                          return total + (rc.optional ? 1 : 0);
                        },
                    },
                    u);
}

double unit_log_word_count(const RegexUnit& u) {
  return std::visit(Overloaded{
                        [](const LiteralUnion& lu) {
                          return std::log(static_cast<double>(lu.strings.size() + (lu.optional ? 1 : 0)));
                        },
                        [](const RepeatClass& rc) {
                          // log sum_{l=min}^{max} s^l, computed from the top term down.
                          const double ls = std::log(static_cast<double>(class_size(rc.cls)));
                          const double span = static_cast<double>(rc.max - rc.min + 1);
                          const double inv = 1.0 / static_cast<double>(class_size(rc.cls));
                          double lc = static_cast<double>(rc.max) * ls +
                                      std::log((1.0 - std::pow(inv, span)) / (1.0 - inv));
                          if (rc.optional) lc += std::log1p(std::exp(-lc));
                          return lc;
                        },
                    },
                    u);
}

std::size_t unit_node_count(const RegexUnit& u) {
  return std::visit(Overloaded{
                        [](const LiteralUnion& lu) {
                          std::size_t n = lu.strings.size() - 1;
                          for (const auto& s : lu.strings) n += s.size();
                          return n + (lu.optional ? 1 : 0);
                        },
                        [](const RepeatClass& rc) { return std::size_t{2} + (rc.optional ? 1 : 0); },
                    },
                    u);
}

std::size_t unit_min_length(const RegexUnit& u) {
  return std::visit(Overloaded{
                        [](const LiteralUnion& lu) -> std::size_t {
                          if (lu.optional) return 0;
                          std::size_t m = lu.strings[0].size();
                          for (const auto& s : lu.strings) m = std::min(m, s.size());
                          return m;
                        },
                        [](const RepeatClass& rc) -> std::size_t { return rc.optional ? 0 : rc.min; },
                    },
                    u);
}

std::size_t unit_max_length(const RegexUnit& u) {
  return std::visit(Overloaded{
                        [](const LiteralUnion& lu) {
                          std::size_t m = 0;
                          for (const auto& s : lu.strings) m = std::max(m, s.size());
                          return m;
                        },
                        [](const RepeatClass& rc) { return static_cast<std::size_t>(rc.max); },
                    },
                    u);
}

ByteSet unit_chars(const RegexUnit& u) {
  return std::visit(Overloaded{
                        [](const LiteralUnion& lu) {
                          ByteSet b;
                          for (const auto& s : lu.strings)
                            for (char c : s) b.set(static_cast<unsigned char>(c));
                          return b;
                        },
                        [](const RepeatClass& rc) { return class_members(rc.cls); },
                    },
                    u);
}

bool unit_is_literal_only(const RegexUnit& u) { return std::holds_alternative<LiteralUnion>(u); }

namespace {

// Position-set step: from the set of reachable offsets, advance over one unit.
void advance(const RegexUnit& u, std::string_view s, const std::vector<char>& from, std::vector<char>& to) {
  std::fill(to.begin(), to.end(), 0);
  const std::size_t n = s.size();
  std::visit(Overloaded{
                 [&](const LiteralUnion& lu) {
                   for (std::size_t i = 0; i <= n; ++i) {
                     if (!from[i]) continue;
                     if (lu.optional) to[i] = 1;
                     for (const auto& w : lu.strings)
                       if (w.size() <= n - i && s.compare(i, w.size(), w) == 0) to[i + w.size()] = 1;
                   }
                 },
                 [&](const RepeatClass& rc) {
                   const ByteSet& m = class_members(rc.cls);
                   for (std::size_t i = 0; i <= n; ++i) {
                     if (!from[i]) continue;
                     if (rc.optional) to[i] = 1;
                     std::size_t j = i;
                     while (j < n && j - i < rc.max && m.test(static_cast<unsigned char>(s[j]))) {
                       ++j;
                       if (j - i >= rc.min) to[j] = 1;
                     }
                   }
                 },
             },
             u);
}

bool dp_match(const std::vector<RegexUnit>& units, std::string_view s) {
  thread_local std::vector<char> a, b;
  a.assign(s.size() + 1, 0);
  b.assign(s.size() + 1, 0);
  a[0] = 1;
  for (const auto& u : units) {
    advance(u, s, a, b);
    std::swap(a, b);
    if (std::find(a.begin(), a.end(), 1) == a.end()) return false;
  }
  return a[s.size()] != 0;
}

}  // namespace

bool matches(const Pattern& p, std::string_view s) {
  if (auto lit = p.literal_value()) return *lit == s;
  return dp_match(p.units(), s);
}

BigCount word_count(const Pattern& p) {
  BigCount c = 1;
  for (const auto& u : p.units()) c *= unit_word_count(u);
  return c;
}

double log_word_count(const Pattern& p) {
  double l = 0.0;
  for (const auto& u : p.units()) l += unit_log_word_count(u);
  return l;
}

std::size_t node_count(const Pattern& p) {
  std::size_t n = 0;
  for (const auto& u : p.units()) n += unit_node_count(u);
  return n;
}

CostVector cost(const Pattern& p) { return {node_count(p), log_word_count(p)}; }

bool cost_less(const Pattern& a, const Pattern& b, double lambda) {
  const CostVector ca = cost(a), cb = cost(b);
  const double sa = ca.scalar(lambda), sb = cb.scalar(lambda);
  if (std::abs(sa - sb) > 1e-9) return sa < sb;
  if (std::abs(ca.log_word_count - cb.log_word_count) > 1e-9) return ca.log_word_count < cb.log_word_count;
  return a.text() < b.text();
}

std::size_t min_length(const Pattern& p) {
  std::size_t n = 0;
  for (const auto& u : p.units()) n += unit_min_length(u);
  return n;
}

std::size_t max_length(const Pattern& p) {
  std::size_t n = 0;
  for (const auto& u : p.units()) n += unit_max_length(u);
  return n;
}

ByteSet possible_chars(const Pattern& p) {
  ByteSet b;
  for (const auto& u : p.units()) b |= unit_chars(u);
  return b;
}

std::vector<std::string> sample_words(const Pattern& p, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<char>> members(kCharClassCount);
  for (CharClassId id : all_char_classes()) {
    auto& m = members[static_cast<std::size_t>(id)];
    for (int c = 0; c < 256; ++c)
      if (class_contains(id, static_cast<unsigned char>(c))) m.push_back(static_cast<char>(c));
  }
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::string w;
    for (const auto& u : p.units()) {
      std::visit(Overloaded{
                     [&](const LiteralUnion& lu) {
                       std::uniform_int_distribution<std::size_t> d(0, lu.strings.size() - (lu.optional ? 0 : 1));
                       const std::size_t i = d(rng);
                       if (i < lu.strings.size()) w += lu.strings[i];
                     },
                     [&](const RepeatClass& rc) {
                       const std::size_t span = rc.max - rc.min + 1;
                       std::uniform_int_distribution<std::size_t> d(0, span - (rc.optional ? 0 : 1));
                       const std::size_t i = d(rng);
                       if (i >= span) return;
                       const auto& m = members[static_cast<std::size_t>(rc.cls)];
                       std::uniform_int_distribution<std::size_t> dc(0, m.size() - 1);
                       for (std::size_t j = 0; j < rc.min + i; ++j) w.push_back(m[dc(rng)]);
                     },
                 },
                 u);
    }
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

std::vector<std::string> unit_words(const RegexUnit& u) {
  std::vector<std::string> out;
  std::visit(Overloaded{
                 [&](const LiteralUnion& lu) {
                   if (lu.optional) out.emplace_back();
                   out.insert(out.end(), lu.strings.begin(), lu.strings.end());
                 },
                 [&](const RepeatClass& rc) {
                   if (rc.optional) out.emplace_back();
                   std::vector<char> m;
                   for (int c = 0; c < 256; ++c)
                     if (class_contains(rc.cls, static_cast<unsigned char>(c))) m.push_back(static_cast<char>(c));
                   std::vector<std::string> layer{""};
                   for (std::uint32_t l = 1; l <= rc.max; ++l) {
                     std::vector<std::string> next;
                     next.reserve(layer.size() * m.size());
                     for (const auto& w : layer)
                       for (char c : m) next.push_back(w + c);
                     layer = std::move(next);
                     if (l >= rc.min) out.insert(out.end(), layer.begin(), layer.end());
                   }
                 },
             },
             u);
  return out;
}

}  // namespace

std::optional<std::vector<std::string>> enumerate_words(const Pattern& p, std::size_t limit) {
  if (word_count(p) > BigCount(limit)) return std::nullopt;
  std::vector<std::string> acc{""};
  for (const auto& u : p.units()) {
    const auto ws = unit_words(u);
    std::vector<std::string> next;
    next.reserve(acc.size() * ws.size());
    for (const auto& a : acc)
      for (const auto& w : ws) next.push_back(a + w);
    acc = std::move(next);
  }
  std::sort(acc.begin(), acc.end());
  acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
  return acc;
}

std::optional<RepeatClass> generalize_literals_to_rc(const LiteralUnion& u) {
  ByteSet chars;
  std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
  for (const auto& s : u.strings) {
    for (char c : s) chars.set(static_cast<unsigned char>(c));
    lo = std::min(lo, s.size());
    hi = std::max(hi, s.size());
  }
  if (u.strings.empty()) return std::nullopt;
  if (chars.none()) return std::nullopt;
  auto cls = first_covering(chars);
  if (!cls) return std::nullopt;
  RepeatClass rc;
  rc.cls = *cls;
  rc.optional = u.optional || lo == 0;
  rc.min = static_cast<std::uint32_t>(std::max<std::size_t>(lo, 1));
  rc.max = static_cast<std::uint32_t>(hi);
  return rc;
}

RepeatClass merge_rc(const RepeatClass& a, const RepeatClass& b) {
  RepeatClass rc;
  // Every inventory class is covered by the printable class, so this exists.
  rc.cls = *first_covering(class_members(a.cls) | class_members(b.cls));
  rc.min = std::min(a.min, b.min);
  rc.max = std::max(a.max, b.max);
  rc.optional = a.optional || b.optional;
  return rc;
}

CompiledPattern::CompiledPattern(Pattern p) : pattern_(std::move(p)) {
  if (auto lit = pattern_.literal_value()) literal_ = std::string(*lit);
}

bool CompiledPattern::operator()(std::string_view s) const {
  if (literal_) return *literal_ == s;
  return dp_match(pattern_.units(), s);
}

}  // namespace rulegraph
