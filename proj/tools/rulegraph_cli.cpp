// rulegraph: learn equivalence-class rules from JSON Lines events and flag
// events no rule explains.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "rulegraph/detector.hpp"
#include "rulegraph/error.hpp"
#include "rulegraph/generator.hpp"
#include "rulegraph/harness.hpp"
#include "rulegraph/jsonl.hpp"
#include "rulegraph/metrics.hpp"
#include "rulegraph/ruleset.hpp"
#include "rulegraph/similarity.hpp"
#include "rulegraph/synth.hpp"
#include "rulegraph/trainer.hpp"

namespace rg = rulegraph;
using nlohmann::ordered_json;

namespace {

// Reads `--config` files as JSON: top-level keys are global flags, nested
// objects are subcommands.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    std::vector<CLI::ConfigItem> out;
    walk(j, "", {}, out);
    return out;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  }

  static void walk(const nlohmann::json& j, const std::string& name, std::vector<std::string> prefix,
                   std::vector<CLI::ConfigItem>& out) {
    if (j.is_object()) {
      if (!name.empty()) prefix.push_back(name);
      for (const auto& [k, v] : j.items()) walk(v, k, prefix, out);
      return;
    }
    if (name.empty()) throw CLI::ConversionError("config must be a JSON object");
    CLI::ConfigItem item;
    item.parents = prefix;
    item.name = name;
    if (j.is_array()) {
      for (const auto& v : j) item.inputs.push_back(scalar(v));
    } else if (j.is_boolean()) {
      item.inputs.push_back(j.get<bool>() ? "true" : "false");
    } else {
      item.inputs.push_back(scalar(j));
    }
    out.push_back(std::move(item));
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rg::Error("cannot open " + path + " for writing");
  out << text;
}

rg::TypeConfig load_types(const std::string& path) { return path.empty() ? rg::TypeConfig{} : rg::TypeConfig::load(path); }

unsigned resolve_workers(bool single_core, unsigned workers) {
  if (single_core) return 1;
  if (workers == 0) return std::max(1u, std::thread::hardware_concurrency());
  return workers;
}

struct SimFlags {
  double decay = 0.8;
  int k = 4;
  double threshold = 0.65;
  std::size_t samples = 32;
  std::uint64_t seed = 0;
  int max_rounds = 50;

  void add(CLI::App* cmd) {
    cmd->add_option("--decay", decay, "Similarity decay factor in [0,1)")->capture_default_str();
    cmd->add_option("-k,--iterations", k, "Similarity iterations (> 2)")->capture_default_str();
    cmd->add_option("--threshold", threshold, "Merge threshold on the similarity score")->capture_default_str();
    cmd->add_option("--samples", samples, "Words sampled per pattern for label distance")->capture_default_str();
    cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    cmd->add_option("--max-rounds", max_rounds, "Upper bound on merge rounds")->capture_default_str();
  }

  rg::TrainConfig config() const {
    rg::TrainConfig cfg;
    cfg.sim.decay_factor = decay;
    cfg.sim.iterations = k;
    cfg.sim.merge_threshold = threshold;
    cfg.sim.sample_count = samples;
    cfg.sim.seed = seed;
    cfg.max_outer_iterations = max_rounds;
    cfg.validate();
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-graph anomaly detection over JSON Lines events"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file supplying flag values");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a labeled synthetic corpus");
  std::string gen_preset = "synthetic", gen_spec, gen_train = "train.jsonl", gen_test = "test.jsonl", gen_types;
  std::uint64_t gen_seed = 1;
  std::optional<std::size_t> gen_ntrain, gen_ntest;
  std::optional<double> gen_rate;
  gen->add_option("--preset", gen_preset, "motivating | synthetic | bench")->capture_default_str();
  gen->add_option("--spec", gen_spec, "Generator spec as a JSON file");
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--train-events", gen_ntrain);
  gen->add_option("--test-events", gen_ntest);
  gen->add_option("--anomaly-rate", gen_rate);
  gen->add_option("--train-out", gen_train)->capture_default_str();
  gen->add_option("--test-out", gen_test)->capture_default_str();
  gen->add_option("--types-out", gen_types, "Also write the type configuration");

  // train
  auto* tr = app.add_subcommand("train", "Learn a ruleset from normal events");
  std::string tr_events, tr_types, tr_out = "ruleset.json", tr_report;
  SimFlags tr_sim;
  tr->add_option("--events", tr_events, "Training JSON Lines")->required();
  tr->add_option("--types", tr_types, "Type configuration JSON");
  tr->add_option("--out", tr_out)->capture_default_str();
  tr->add_option("--report", tr_report, "Write the training report as JSON");
  tr_sim.add(tr);

  // detect
  auto* det = app.add_subcommand("detect", "Classify events against a ruleset");
  std::string det_rules, det_events, det_out = "-";
  bool det_single = false;
  unsigned det_workers = 0;
  det->add_option("--ruleset", det_rules)->required();
  det->add_option("--events", det_events)->required();
  det->add_option("--out", det_out, "DetectionResult JSON Lines")->capture_default_str();
  det->add_flag("--single-core", det_single, "Run on the calling thread only");
  det->add_option("--workers", det_workers, "Worker threads (0: all cores)");

  // eval
  auto* ev = app.add_subcommand("eval", "Score detection results against labeled events");
  std::string ev_results, ev_labels, ev_out = "-";
  ev->add_option("--results", ev_results)->required();
  ev->add_option("--labels", ev_labels, "The labeled event file that was classified")->required();
  ev->add_option("--out", ev_out)->capture_default_str();

  // perturb
  auto* pt = app.add_subcommand("perturb", "Drop, duplicate or shuffle a fraction of events");
  std::string pt_events, pt_mode, pt_out = "-";
  double pt_level = 0.0;
  std::uint64_t pt_seed = 1;
  pt->add_option("--events", pt_events)->required();
  pt->add_option("--mode", pt_mode)->required()->check(CLI::IsMember({"drop", "duplicate", "shuffle"}));
  pt->add_option("--level", pt_level)->required()->check(CLI::Range(0.0, 0.99));
  pt->add_option("--seed", pt_seed)->capture_default_str();
  pt->add_option("--out", pt_out)->capture_default_str();

  // sweep
  auto* sw = app.add_subcommand("sweep", "Train and evaluate over a grid of k and thresholds");
  std::string sw_train, sw_test, sw_types, sw_out = "-", sw_trends;
  std::vector<int> sw_ks{3, 4, 5};
  std::vector<double> sw_ts{0.5, 0.65, 0.8};
  unsigned sw_workers = 0;
  SimFlags sw_sim;
  sw->add_option("--train", sw_train)->required();
  sw->add_option("--test", sw_test)->required();
  sw->add_option("--types", sw_types);
  sw->add_option("--ks", sw_ks)->capture_default_str();
  sw->add_option("--thresholds", sw_ts)->capture_default_str();
  sw->add_option("--workers", sw_workers);
  sw->add_option("--out", sw_out, "CSV table")->capture_default_str();
  sw->add_option("--trends", sw_trends, "Write per-k recall trend flags as JSON");
  sw_sim.add(sw);

  // bench
  auto* bn = app.add_subcommand("bench", "Measure detection throughput");
  std::string bn_rules, bn_events;
  std::size_t bn_count = 20000;
  bool bn_single = false, bn_match_only = false;
  unsigned bn_workers = 0;
  bn->add_option("--ruleset", bn_rules, "Defaults to the built-in 50-rule ruleset");
  bn->add_option("--events", bn_events, "Defaults to generated ~1 KB events");
  bn->add_option("--count", bn_count, "Generated event count")->capture_default_str();
  bn->add_flag("--single-core", bn_single);
  bn->add_flag("--match-only", bn_match_only, "Print only the rate excluding JSON parsing");
  bn->add_option("--workers", bn_workers);

  // synth
  auto* sy = app.add_subcommand("synth", "Generalize two patterns away from negatives");
  std::string sy_a, sy_b;
  std::vector<std::string> sy_neg;
  bool sy_explain = false;
  double sy_lambda = 0.5;
  sy->add_option("a", sy_a)->required();
  sy->add_option("b", sy_b)->required();
  sy->add_option("-n,--negative", sy_neg, "Pattern the result must not intersect");
  sy->add_option("--lambda", sy_lambda)->capture_default_str();
  sy->add_flag("--explain", sy_explain, "List every scored candidate");

  // simdump
  auto* sd = app.add_subcommand("simdump", "Print vertex similarity scores of an event set");
  std::string sd_events, sd_types;
  double sd_min = 0.0;
  SimFlags sd_sim;
  sd->add_option("--events", sd_events)->required();
  sd->add_option("--types", sd_types);
  sd->add_option("--min-score", sd_min)->capture_default_str();
  sd_sim.add(sd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) {
      rg::GeneratorSpec spec;
      if (!gen_spec.empty()) {
        std::ifstream in(gen_spec);
        if (!in) throw rg::ValidationError("cannot read " + gen_spec);
        spec = rg::GeneratorSpec::from_json(ordered_json::parse(in));
      } else {
        spec = rg::GeneratorSpec::preset_defaults(gen_preset);
        spec.seed = gen_seed;
      }
      if (gen_ntrain) spec.train_events = *gen_ntrain;
      if (gen_ntest) spec.test_events = *gen_ntest;
      if (gen_rate) spec.anomaly_rate = *gen_rate;
      auto corpus = rg::generate(spec);
      rg::write_jsonl(gen_train, corpus.train);
      rg::write_jsonl(gen_test, corpus.test);
      if (!gen_types.empty()) write_text(gen_types, corpus.types.to_json().dump(2) + "\n");
    } else if (*tr) {
      auto cfg = tr_sim.config();
      auto types = load_types(tr_types);
      auto result = rg::train(rg::parse_events(rg::read_jsonl(tr_events), types), types, cfg);
      write_text(tr_out, result.ruleset.dump());
      if (!tr_report.empty()) write_text(tr_report, result.report.to_json().dump(2) + "\n");
      std::cerr << result.ruleset.rules().size() << " rules after " << result.report.rounds << " rounds\n";
    } else if (*det) {
      rg::Detector d(rg::Ruleset::load(det_rules));
      rg::DetectCounters counters;
      auto results = d.detect_lines(rg::read_jsonl(det_events), counters, resolve_workers(det_single, det_workers));
      std::vector<std::string> out;
      out.reserve(results.size());
      for (const auto& r : results) out.push_back(r.to_json().dump());
      rg::write_jsonl(det_out, out);
      std::cerr << counters.to_json().dump() << "\n";
    } else if (*ev) {
      std::vector<rg::DetectionResult> results;
      for (const auto& line : rg::read_jsonl(ev_results)) {
        const auto j = nlohmann::json::parse(line);
        rg::DetectionResult r;
        const auto v = j.at("verdict").get<std::string>();
        r.verdict = v == "normal" ? rg::Verdict::kNormal : v == "malformed" ? rg::Verdict::kMalformed : rg::Verdict::kAnomalous;
        results.push_back(std::move(r));
      }
      std::vector<rg::Label> truth;
      for (const auto& line : rg::read_jsonl(ev_labels)) {
        rg::Label lab = rg::Label::kNormal;
        try {
          const auto j = nlohmann::json::parse(line);
          if (j.is_object() && j.value("_label", std::string{}) == "anomaly") lab = rg::Label::kAnomaly;
        } catch (const nlohmann::json::exception&) {
        }
        truth.push_back(lab);
      }
      write_text(ev_out, rg::evaluate(results, truth).to_json().dump(2) + "\n");
    } else if (*pt) {
      rg::write_jsonl(pt_out, rg::perturb(rg::read_jsonl(pt_events), rg::parse_perturb_mode(pt_mode), pt_level, pt_seed));
    } else if (*sw) {
      auto cfg = sw_sim.config();
      auto rows = rg::sweep(rg::read_jsonl(sw_train), rg::read_jsonl(sw_test), load_types(sw_types), cfg, sw_ks, sw_ts,
                            resolve_workers(false, sw_workers));
      write_text(sw_out, rg::sweep_csv(rows));
      if (!sw_trends.empty()) write_text(sw_trends, rg::sweep_trends(rows).dump(2) + "\n");
    } else if (*bn) {
      rg::Ruleset rs = bn_rules.empty() ? rg::bench_ruleset() : rg::Ruleset::load(bn_rules);
      std::vector<std::string> lines;
      if (bn_events.empty()) {
        auto spec = rg::GeneratorSpec::preset_defaults("bench");
        spec.train_events = 0;
        spec.test_events = bn_count;
        lines = rg::generate(spec).test;
      } else {
        lines = rg::read_jsonl(bn_events);
      }
      auto rep = rg::bench(rs, lines, resolve_workers(bn_single, bn_workers));
      if (bn_match_only) {
        std::cout << ordered_json{{"events_per_second", rep.events_per_second_match_only},
                                  {"mb_per_second", rep.mb_per_second_match_only}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << rep.to_json().dump(2) << "\n";
      }
    } else if (*sy) {
      rg::SynthConfig cfg;
      cfg.lambda = sy_lambda;
      std::vector<rg::Pattern> negs;
      for (const auto& n : sy_neg) negs.push_back(rg::parse(n));
      auto res = rg::merge_regex_explain(rg::parse(sy_a), rg::parse(sy_b), negs, cfg);
      ordered_json out{{"result", res.winner ? ordered_json(res.winner->text()) : ordered_json(nullptr)}};
      if (sy_explain) {
        auto cands = ordered_json::array();
        for (const auto& c : res.candidates)
          cands.push_back({{"pattern", c.pattern.text()},
                           {"nodes", c.cost.node_count},
                           {"log_words", c.cost.log_word_count},
                           {"cost", c.scalar},
                           {"rejected", c.rejected}});
        out["candidates"] = std::move(cands);
      }
      std::cout << out.dump(2) << "\n";
      return res.winner ? 0 : 1;
    } else if (*sd) {
      auto cfg = sd_sim.config();
      auto types = load_types(sd_types);
      auto g = rg::RuleHypergraph::build(rg::parse_events(rg::read_jsonl(sd_events), types), types);
      rg::LabelSimilarity labels(cfg.sim);
      auto vs = rg::VertexSimilarity::compute(g, cfg.sim, labels);
      for (const auto& p : vs.pairs_above(g, sd_min)) {
        const auto& key = g.slot_key(g.vertex_slot(p.a));
        std::cout << ordered_json{{"key", key.first},
                                  {"type", key.second},
                                  {"a", g.vertex_value(p.a).text()},
                                  {"b", g.vertex_value(p.b).text()},
                                  {"raw", vs.raw(p.a, p.b)},
                                  {"score", p.score}}
                         .dump()
                  << "\n";
      }
    }
  } catch (const rg::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rg::IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
