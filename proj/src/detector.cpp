#include "rulegraph/detector.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

void append_slot(std::string& key, std::string_view k, std::string_view t) {
  key += k;
  key.push_back('\x1f');
  key += t;
  key.push_back('\x1e');
}

std::string signature_key(const EventRecord& e) {
  std::string key;
  for (const auto& t : e.triples) append_slot(key, t.key, t.type);
  return key;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kNormal: return "normal";
    case Verdict::kAnomalous: return "anomalous";
    case Verdict::kMalformed: return "malformed";
  }
  return "?";
}

std::string_view to_string(AnomalyKind k) {
  switch (k) {
    case AnomalyKind::kNone: return "none";
    case AnomalyKind::kUnknownSignature: return "unknown_signature";
    case AnomalyKind::kValueMismatch: return "value_mismatch";
  }
  return "?";
}

nlohmann::ordered_json DetectionResult::to_json() const {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(verdict);
  if (rule_id) j["rule_id"] = *rule_id;
  if (verdict == Verdict::kAnomalous) {
    j["reason"] = to_string(kind);
    if (kind == AnomalyKind::kValueMismatch) {
      j["nearest_rules"] = nearest_rules;
      j["failed_keys"] = failed_keys;
    }
  }
  if (verdict == Verdict::kMalformed) j["error"] = error;
  return j;
}

nlohmann::ordered_json DetectCounters::to_json() const {
  return {{"total", total},
          {"normal", normal},
          {"anomalous", anomalous},
          {"malformed", malformed},
          {"seconds", seconds},
          {"events_per_second", events_per_second()},
          {"mb_per_second", megabytes_per_second()}};
}

Detector::Detector(Ruleset rs) : rs_(std::move(rs)) {
  for (const auto& [sig, members] : rs_.buckets()) {
    std::string key;
    for (const auto& [k, t] : sig) append_slot(key, k, t);
    auto& b = buckets_[key];
    for (std::size_t i : members) {
      CompiledRule cr{i, {}};
      for (const auto& p : rs_.rules()[i].patterns) cr.patterns.emplace_back(p);
      b.push_back(std::move(cr));
    }
  }
}

const std::vector<Detector::CompiledRule>* Detector::bucket(const EventRecord& e) const {
  auto it = buckets_.find(signature_key(e));
  return it == buckets_.end() ? nullptr : &it->second;
}

namespace {

bool value_matches(const CompiledPattern& cp, const Pattern& v) {
  if (auto lit = v.literal_value()) return cp(*lit);
  // Events are concrete; a non-literal value only matches its own pattern.
  return cp.pattern() == v;
}

}  // namespace

DetectionResult Detector::match_event(const EventRecord& e) const {
  DetectionResult res;
  const auto* b = bucket(e);
  if (!b) {
    res.verdict = Verdict::kAnomalous;
    res.kind = AnomalyKind::kUnknownSignature;
    return res;
  }
  for (const auto& cr : *b) {
    bool ok = true;
    for (std::size_t i = 0; i < cr.patterns.size() && ok; ++i) ok = value_matches(cr.patterns[i], e.triples[i].value);
    if (ok) {
      res.rule_id = rs_.rules()[cr.index].id;
      return res;
    }
  }
  res.verdict = Verdict::kAnomalous;
  res.kind = AnomalyKind::kValueMismatch;
  std::vector<std::size_t> hits(b->size(), 0);
  for (std::size_t r = 0; r < b->size(); ++r)
    for (std::size_t i = 0; i < (*b)[r].patterns.size(); ++i)
      hits[r] += value_matches((*b)[r].patterns[i], e.triples[i].value);
  const std::size_t best = *std::max_element(hits.begin(), hits.end());
  std::vector<const CompiledRule*> nearest;
  for (std::size_t r = 0; r < b->size() && nearest.size() < 3; ++r)
    if (hits[r] == best) nearest.push_back(&(*b)[r]);
  for (const auto* cr : nearest) res.nearest_rules.push_back(rs_.rules()[cr->index].id);
  if (!nearest.empty()) {
    for (std::size_t i = 0; i < nearest.front()->patterns.size(); ++i)
      if (!value_matches(nearest.front()->patterns[i], e.triples[i].value)) res.failed_keys.push_back(e.triples[i].key);
  }
  return res;
}

std::size_t Detector::count_matches(const EventRecord& e) const {
  const auto* b = bucket(e);
  if (!b) return 0;
  std::size_t n = 0;
  for (const auto& cr : *b) {
    bool ok = true;
    for (std::size_t i = 0; i < cr.patterns.size() && ok; ++i) ok = value_matches(cr.patterns[i], e.triples[i].value);
    n += ok;
  }
  return n;
}

namespace {

template <class Fn>
void run_sharded(std::size_t n, unsigned workers, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1u, hw);
  if (workers == 1 || n < 2 * workers) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

void tally(const std::vector<DetectionResult>& out, DetectCounters& c) {
  for (const auto& r : out) {
    ++c.total;
    if (r.verdict == Verdict::kNormal) ++c.normal;
    else if (r.verdict == Verdict::kAnomalous) ++c.anomalous;
    else ++c.malformed;
  }
}

}  // namespace

std::vector<DetectionResult> Detector::detect_lines(const std::vector<std::string>& lines, DetectCounters& counters,
                                                    unsigned workers) const {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<DetectionResult> out(lines.size());
  run_sharded(lines.size(), workers, [&](std::size_t lo, std::size_t hi) {
    Flattener fl(rs_.types());
    for (std::size_t i = lo; i < hi; ++i) {
      try {
        out[i] = match_event(fl.parse_line(lines[i]));
      } catch (const IngestError& e) {
        out[i].verdict = Verdict::kMalformed;
        out[i].error = e.what();
      }
    }
  });
  counters.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& l : lines) counters.bytes += l.size() + 1;
  tally(out, counters);
  return out;
}

std::vector<DetectionResult> Detector::detect_events(const std::vector<EventRecord>& events, DetectCounters& counters,
                                                     unsigned workers) const {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<DetectionResult> out(events.size());
  run_sharded(events.size(), workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out[i] = match_event(events[i]);
  });
  counters.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  tally(out, counters);
  return out;
}

std::vector<GeneralizationViolation> generalization_check(const Ruleset& rs, const std::vector<EventRecord>& events) {
  Detector d(rs);
  std::vector<GeneralizationViolation> out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::size_t n = d.count_matches(events[i]);
    if (n != 1) out.push_back({i, n});
  }
  return out;
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace rulegraph
