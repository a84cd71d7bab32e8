#include "rulegraph/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <thread>

#include "rulegraph/error.hpp"
#include "rulegraph/jsonl.hpp"

namespace rulegraph {

PipelineResult run_pipeline(const std::vector<std::string>& train_lines, const std::vector<std::string>& test_lines,
                            const TypeConfig& types, const TrainConfig& cfg) {
  PipelineResult out;
  auto trained = train(parse_events(train_lines, types), types, cfg);
  out.ruleset = std::move(trained.ruleset);
  out.report = trained.report;
  Detector det(out.ruleset);
  DetectCounters counters;
  out.results = det.detect_lines(test_lines, counters, 1);
  // Labels are read independently of modeling so malformed lines keep theirs.
  std::vector<Label> truth;
  truth.reserve(test_lines.size());
  for (const auto& l : test_lines) {
    Label lab = Label::kNormal;
    try {
      const auto j = nlohmann::json::parse(l);
      if (j.is_object() && j.value("_label", std::string{}) == "anomaly") lab = Label::kAnomaly;
    } catch (const nlohmann::json::exception&) {
    }
    truth.push_back(lab);
  }
  out.metrics = evaluate(out.results, truth);
  return out;
}

std::vector<SweepRow> sweep(const std::vector<std::string>& train_lines, const std::vector<std::string>& test_lines,
                            const TypeConfig& types, const TrainConfig& base, const std::vector<int>& ks,
                            const std::vector<double>& thresholds, unsigned workers) {
  for (int k : ks)
    if (k <= 2) throw ValidationError("every k in a sweep must be greater than 2");
  std::vector<SweepRow> rows;
  for (int k : ks)
    for (double t : thresholds) rows.push_back({k, t, {}, 0, 0.0});
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      TrainConfig cfg = base;
      cfg.sim.iterations = rows[i].k;
      cfg.sim.merge_threshold = rows[i].threshold;
      auto res = run_pipeline(train_lines, test_lines, types, cfg);
      rows[i].metrics = res.metrics;
      rows[i].rules = res.ruleset.rules().size();
      rows[i].train_seconds = res.report.wall_seconds;
    }
  };
  workers = std::clamp(workers, 1u, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "k,threshold,tp,fp,fn,tn,precision,recall,f1,rules\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.4f,%llu,%llu,%llu,%llu,%.6f,%.6f,%.6f,%zu\n", r.k, r.threshold,
                  static_cast<unsigned long long>(r.metrics.tp), static_cast<unsigned long long>(r.metrics.fp),
                  static_cast<unsigned long long>(r.metrics.fn), static_cast<unsigned long long>(r.metrics.tn),
                  r.metrics.precision, r.metrics.recall, r.metrics.f1, r.rules);
    out += buf;
  }
  return out;
}

nlohmann::ordered_json sweep_trends(const std::vector<SweepRow>& rows) {
  std::map<int, std::vector<const SweepRow*>> by_k;
  for (const auto& r : rows) by_k[r.k].push_back(&r);
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (auto& [k, rs] : by_k) {
    std::stable_sort(rs.begin(), rs.end(), [](const SweepRow* a, const SweepRow* b) { return a->threshold < b->threshold; });
    bool monotone = true;
    for (std::size_t i = 1; i < rs.size(); ++i) monotone = monotone && rs[i]->metrics.recall <= rs[i - 1]->metrics.recall;
    out.push_back({{"k", k}, {"recall_non_increasing_in_threshold", monotone}});
  }
  return out;
}

nlohmann::ordered_json BenchReport::to_json() const {
  return {{"rules", rules},
          {"events", events},
          {"bytes", bytes},
          {"workers", workers},
          {"events_per_second_with_parse", events_per_second_with_parse},
          {"mb_per_second_with_parse", mb_per_second_with_parse},
          {"events_per_second_match_only", events_per_second_match_only},
          {"mb_per_second_match_only", mb_per_second_match_only}};
}

BenchReport bench(const Ruleset& rs, const std::vector<std::string>& lines, unsigned workers) {
  BenchReport rep;
  rep.rules = rs.rules().size();
  rep.events = lines.size();
  rep.workers = std::max(1u, workers);
  for (const auto& l : lines) rep.bytes += l.size() + 1;
  Detector det(rs);

  DetectCounters with_parse;
  det.detect_lines(lines, with_parse, rep.workers);
  rep.events_per_second_with_parse = with_parse.events_per_second();
  rep.mb_per_second_with_parse = static_cast<double>(rep.bytes) / 1e6 / std::max(with_parse.seconds, 1e-12);

  std::vector<EventRecord> events;
  events.reserve(lines.size());
  Flattener fl(rs.types());
  for (const auto& l : lines) {
    try {
      events.push_back(fl.parse_line(l));
    } catch (const IngestError&) {
    }
  }
  DetectCounters match_only;
  det.detect_events(events, match_only, rep.workers);
  rep.events_per_second_match_only = match_only.events_per_second();
  rep.mb_per_second_match_only = static_cast<double>(rep.bytes) / 1e6 / std::max(match_only.seconds, 1e-12);
  return rep;
}

}  // namespace rulegraph
