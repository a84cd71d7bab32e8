#include "rulegraph/synth.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string_view>

namespace rulegraph {
namespace {

constexpr std::string_view kSeparators = "-_/.:";

bool is_sep(char c) { return kSeparators.find(c) != std::string_view::npos; }

// A pattern cut into fields; seps[i] sits between fields[i] and fields[i+1].
struct Fields {
  std::vector<std::vector<RegexUnit>> fields;
  std::string seps;
};

Fields tokenize(const Pattern& p) {
  Fields f;
  f.fields.emplace_back();
  for (const auto& u : p.units()) {
    const auto* lu = std::get_if<LiteralUnion>(&u);
    if (!lu || lu->optional || lu->strings.size() != 1) {
      f.fields.back().push_back(u);
      continue;
    }
    std::string run;
    for (char c : lu->strings[0]) {
      if (!is_sep(c)) {
        run.push_back(c);
        continue;
      }
      if (!run.empty()) f.fields.back().push_back(LiteralUnion{{run}, false});
      run.clear();
      f.seps.push_back(c);
      f.fields.emplace_back();
    }
    if (!run.empty()) f.fields.back().push_back(LiteralUnion{{run}, false});
  }
  return f;
}

std::optional<std::string> leading_literal(const Pattern& p) {
  if (p.units().empty()) return std::string{};
  const auto* lu = std::get_if<LiteralUnion>(&p.units().front());
  if (lu && !lu->optional && lu->strings.size() == 1) return lu->strings[0];
  return std::nullopt;
}

std::optional<std::string> trailing_literal(const Pattern& p) {
  if (p.units().empty()) return std::string{};
  const auto* lu = std::get_if<LiteralUnion>(&p.units().back());
  if (lu && !lu->optional && lu->strings.size() == 1) return lu->strings[0];
  return std::nullopt;
}

// Drops `n` leading characters (front) or trailing characters (back) from a
// pattern whose edge unit is a plain literal of at least that length.
Pattern trim(const Pattern& p, std::size_t front, std::size_t back) {
  std::vector<RegexUnit> units = p.units();
  if (front) {
    auto& s = std::get<LiteralUnion>(units.front()).strings[0];
    s.erase(0, front);
    if (s.empty()) units.erase(units.begin());
  }
  if (back) {
    auto& s = std::get<LiteralUnion>(units.back()).strings[0];
    s.erase(s.size() - back);
    if (s.empty()) units.pop_back();
  }
  return Pattern::from_units(std::move(units));
}

// A piece of a candidate: either fixed text or a choice among alternatives.
struct Slot {
  std::vector<std::vector<RegexUnit>> options;  // sorted by cost
  std::vector<double> costs;
};

std::vector<RegexUnit> as_units(const Pattern& p) { return p.units(); }

double units_cost(const std::vector<RegexUnit>& us, double lambda) {
  double c = 0;
  for (const auto& u : us) c += static_cast<double>(unit_node_count(u)) + lambda * unit_log_word_count(u);
  return c;
}

const RepeatClass* single_rc(const Pattern& p) {
  if (p.units().size() != 1) return nullptr;
  return std::get_if<RepeatClass>(&p.units().front());
}

// Generalizing alternatives for a differing pair of sub-patterns.
void var_options(const Pattern& a, const Pattern& b, const SynthConfig& cfg, std::vector<std::vector<RegexUnit>>& out) {
  auto wa = enumerate_words(a, cfg.union_bound);
  auto wb = wa ? enumerate_words(b, cfg.union_bound) : std::nullopt;
  if (wa && wb) {
    LiteralUnion lu;
    lu.strings = *wa;
    lu.strings.insert(lu.strings.end(), wb->begin(), wb->end());
    out.push_back(Pattern::from_units({lu}).units());
  }
  const ByteSet chars = possible_chars(a) | possible_chars(b);
  const std::size_t lo = std::min(min_length(a), min_length(b));
  const std::size_t hi = std::max(max_length(a), max_length(b));
  if (chars.any() && hi > 0) {
    if (auto cls = first_covering(chars)) {
      RepeatClass rc{*cls, static_cast<std::uint32_t>(std::max<std::size_t>(lo, 1)), static_cast<std::uint32_t>(hi),
                     lo == 0};
      out.push_back({rc});
    }
  }
  const RepeatClass* ra = single_rc(a);
  const RepeatClass* rb = single_rc(b);
  if (ra || rb) {
    auto lift = [](const Pattern& p, const RepeatClass* r) -> std::optional<RepeatClass> {
      if (r) return *r;
      if (p.units().size() == 1)
        if (const auto* lu = std::get_if<LiteralUnion>(&p.units().front())) return generalize_literals_to_rc(*lu);
      return std::nullopt;
    };
    auto la = lift(a, ra), lb = lift(b, rb);
    if (la && lb) out.push_back({merge_rc(*la, *lb)});
  }
}

// Best-first walk over the cross product of slot options.
void cross_product(const std::vector<Slot>& slots, std::size_t cap, std::vector<Pattern>& out) {
  if (slots.empty()) {
    out.push_back(Pattern{});
    return;
  }
  for (const auto& s : slots)
    if (s.options.empty()) return;
  using Idx = std::vector<std::uint16_t>;
  auto total = [&](const Idx& ix) {
    double c = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) c += slots[i].costs[ix[i]];
    return c;
  };
  using Item = std::pair<double, Idx>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  std::set<Idx> seen;
  Idx start(slots.size(), 0);
  pq.emplace(total(start), start);
  seen.insert(start);
  std::size_t emitted = 0;
  while (!pq.empty() && emitted < cap) {
    Idx ix = pq.top().second;
    pq.pop();
    std::vector<RegexUnit> units;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto& o = slots[i].options[ix[i]];
      units.insert(units.end(), o.begin(), o.end());
    }
    out.push_back(Pattern::from_units(std::move(units)));
    ++emitted;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (ix[i] + 1u >= slots[i].options.size()) continue;
      Idx nx = ix;
      ++nx[i];
      if (seen.insert(nx).second) pq.emplace(total(nx), nx);
    }
  }
}

void add_slot(std::vector<Slot>& slots, std::vector<std::vector<RegexUnit>> options, double lambda) {
  Slot s;
  std::vector<std::pair<double, std::vector<RegexUnit>>> scored;
  std::set<std::string> seen;
  for (auto& o : options) {
    std::string key;
    for (const auto& u : o) key += render_unit(u) + '\x01';
    if (!seen.insert(key).second) continue;
    scored.emplace_back(units_cost(o, lambda), std::move(o));
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [c, o] : scored) {
    s.costs.push_back(c);
    s.options.push_back(std::move(o));
  }
  slots.push_back(std::move(s));
}

// Slots for one aligned pair: shared text stays fixed, the differing middle
// becomes a choice. `strip` controls whether common literal ends are kept.
void pair_slots(const Pattern& a, const Pattern& b, bool strip, const SynthConfig& cfg, std::vector<Slot>& slots) {
  if (a == b) {
    add_slot(slots, {as_units(a)}, cfg.lambda);
    return;
  }
  std::string pre, suf;
  Pattern ma = a, mb = b;
  if (strip) {
    auto ha = leading_literal(a), hb = leading_literal(b);
    std::size_t np = 0;
    if (ha && hb)
      while (np < ha->size() && np < hb->size() && (*ha)[np] == (*hb)[np]) ++np;
    ma = trim(a, np, 0);
    mb = trim(b, np, 0);
    pre = ha ? ha->substr(0, np) : std::string{};
    auto ta = trailing_literal(ma), tb = trailing_literal(mb);
    std::size_t ns = 0;
    if (ta && tb)
      while (ns < ta->size() && ns < tb->size() && (*ta)[ta->size() - 1 - ns] == (*tb)[tb->size() - 1 - ns]) ++ns;
    if (ns) {
      suf = ta->substr(ta->size() - ns);
      ma = trim(ma, 0, ns);
      mb = trim(mb, 0, ns);
    }
  }
  if (!pre.empty()) add_slot(slots, {{LiteralUnion{{pre}, false}}}, cfg.lambda);
  std::vector<std::vector<RegexUnit>> opts;
  var_options(ma, mb, cfg, opts);
  add_slot(slots, std::move(opts), cfg.lambda);
  if (!suf.empty()) add_slot(slots, {{LiteralUnion{{suf}, false}}}, cfg.lambda);
}

std::vector<Pattern> enumerate_candidates(const Pattern& r1, const Pattern& r2, const SynthConfig& cfg) {
  std::vector<Pattern> out;
  if (r1 == r2) out.push_back(r1);
  if (auto al = split_aligned(r1, r2)) {
    for (bool strip : {true, false}) {
      std::vector<Slot> slots;
      for (const auto& [a, b] : *al) pair_slots(a, b, strip, cfg, slots);
      cross_product(slots, cfg.candidate_cap, out);
    }
  }
  for (bool strip : {true, false}) {
    std::vector<Slot> slots;
    pair_slots(r1, r2, strip, cfg, slots);
    cross_product(slots, cfg.candidate_cap, out);
  }
  std::sort(out.begin(), out.end(), [&](const Pattern& x, const Pattern& y) { return cost_less(x, y, cfg.lambda); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.size() > cfg.candidate_cap) out.resize(cfg.candidate_cap);
  return out;
}

}  // namespace

std::optional<std::vector<AlignedPair>> split_aligned(const Pattern& r1, const Pattern& r2) {
  Fields f1 = tokenize(r1), f2 = tokenize(r2);
  if (f1.seps != f2.seps) return std::nullopt;
  std::vector<AlignedPair> out;
  for (std::size_t i = 0; i < f1.fields.size(); ++i) {
    Pattern a = Pattern::from_units(f1.fields[i]);
    Pattern b = Pattern::from_units(f2.fields[i]);
    if (!a.units().empty() || !b.units().empty()) out.emplace_back(std::move(a), std::move(b));
    if (i < f1.seps.size()) {
      Pattern s = Pattern::literal(std::string(1, f1.seps[i]));
      out.emplace_back(s, s);
    }
  }
  return out;
}

SynthResult merge_regex_explain(const Pattern& r1, const Pattern& r2, const std::vector<Pattern>& negatives,
                                const SynthConfig& cfg) {
  SynthResult res;
  for (auto& p : enumerate_candidates(r1, r2, cfg)) {
    ScoredCandidate c;
    c.cost = cost(p);
    c.scalar = c.cost.scalar(cfg.lambda);
    c.rejected = std::any_of(negatives.begin(), negatives.end(), [&](const Pattern& n) { return intersects(p, n); });
    if (!c.rejected && !res.winner) res.winner = p;
    c.pattern = std::move(p);
    res.candidates.push_back(std::move(c));
  }
  return res;
}

std::optional<Pattern> merge_regex(const Pattern& r1, const Pattern& r2, const std::vector<Pattern>& negatives,
                                   const SynthConfig& cfg) {
  for (const auto& p : enumerate_candidates(r1, r2, cfg)) {
    if (std::none_of(negatives.begin(), negatives.end(), [&](const Pattern& n) { return intersects(p, n); })) return p;
  }
  return std::nullopt;
}

}  // namespace rulegraph
