#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rulegraph/detector.hpp"
#include "rulegraph/error.hpp"
#include "rulegraph/generator.hpp"
#include "rulegraph/harness.hpp"
#include "rulegraph/jsonl.hpp"
#include "rulegraph/metrics.hpp"
#include "rulegraph/ruleset.hpp"
#include "rulegraph/synth.hpp"
#include "rulegraph/trainer.hpp"

namespace py = pybind11;
namespace rg = rulegraph;

namespace {

rg::TypeConfig types_from(const std::string& json) {
  return json.empty() ? rg::TypeConfig{} : rg::TypeConfig::from_json(nlohmann::ordered_json::parse(json));
}

}  // namespace

PYBIND11_MODULE(_rulegraph, m) {
  m.doc() = "Rule-graph anomaly detection core";

  py::register_exception<rg::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<rg::ParseError>(m, "PatternError", PyExc_ValueError);
  py::register_exception<rg::IngestError>(m, "IngestError", PyExc_ValueError);

  m.def("canonical", [](const std::string& text) { return rg::parse(text).text(); }, py::arg("pattern"));
  m.def(
      "matches", [](const std::string& pattern, const std::string& s) { return rg::matches(rg::parse(pattern), s); },
      py::arg("pattern"), py::arg("text"));
  m.def(
      "merge_regex",
      [](const std::string& a, const std::string& b, const std::vector<std::string>& negatives) -> std::optional<std::string> {
        std::vector<rg::Pattern> negs;
        for (const auto& n : negatives) negs.push_back(rg::parse(n));
        auto r = rg::merge_regex(rg::parse(a), rg::parse(b), negs);
        if (!r) return std::nullopt;
        return r->text();
      },
      py::arg("a"), py::arg("b"), py::arg("negatives") = std::vector<std::string>{});

  m.def(
      "generate",
      [](const std::string& preset, std::uint64_t seed, std::optional<std::size_t> train_events,
         std::optional<std::size_t> test_events) {
        auto spec = rg::GeneratorSpec::preset_defaults(preset);
        spec.seed = seed;
        if (train_events) spec.train_events = *train_events;
        if (test_events) spec.test_events = *test_events;
        auto c = rg::generate(spec);
        return py::make_tuple(c.train, c.test, c.types.to_json().dump());
      },
      py::arg("preset") = "synthetic", py::arg("seed") = 1, py::arg("train_events") = py::none(),
      py::arg("test_events") = py::none(), "Returns (train lines, test lines, type config JSON).");

  m.def(
      "train",
      [](const std::vector<std::string>& lines, const std::string& types_json, int k, double threshold, double decay) {
        rg::TrainConfig cfg;
        cfg.sim.iterations = k;
        cfg.sim.merge_threshold = threshold;
        cfg.sim.decay_factor = decay;
        cfg.validate();
        auto types = types_from(types_json);
        std::vector<rg::EventRecord> events;
        {
          py::gil_scoped_release nogil;
          events = rg::parse_events(lines, types);
        }
        py::gil_scoped_release nogil;
        return rg::train(events, types, cfg).ruleset.dump();
      },
      py::arg("lines"), py::arg("types") = "", py::arg("k") = 4, py::arg("threshold") = 0.65, py::arg("decay") = 0.8,
      "Trains on JSON Lines and returns the ruleset as JSON text.");

  py::class_<rg::Detector>(m, "Detector")
      .def(py::init([](const std::string& ruleset_json) {
             return rg::Detector(rg::Ruleset::from_json(nlohmann::ordered_json::parse(ruleset_json)));
           }),
           py::arg("ruleset_json"))
      .def_property_readonly("rule_count", [](const rg::Detector& d) { return d.ruleset().rules().size(); })
      .def(
          "detect",
          [](const rg::Detector& d, const std::vector<std::string>& lines, unsigned workers) {
            std::vector<std::string> out;
            {
              py::gil_scoped_release nogil;
              rg::DetectCounters counters;
              for (const auto& r : d.detect_lines(lines, counters, workers)) out.push_back(r.to_json().dump());
            }
            return out;
          },
          py::arg("lines"), py::arg("workers") = 1, "One DetectionResult JSON object per input line.");

  m.def(
      "evaluate",
      [](const std::vector<std::string>& results, const std::vector<std::string>& labeled_lines) {
        std::vector<rg::DetectionResult> rs;
        for (const auto& line : results) {
          rg::DetectionResult r;
          const auto v = nlohmann::json::parse(line).at("verdict").get<std::string>();
          r.verdict = v == "normal" ? rg::Verdict::kNormal : v == "malformed" ? rg::Verdict::kMalformed : rg::Verdict::kAnomalous;
          rs.push_back(std::move(r));
        }
        std::vector<rg::Label> truth;
        for (const auto& line : labeled_lines) {
          auto j = nlohmann::json::parse(line, nullptr, false);
          bool anomaly = !j.is_discarded() && j.is_object() && j.value("_label", std::string{}) == "anomaly";
          truth.push_back(anomaly ? rg::Label::kAnomaly : rg::Label::kNormal);
        }
        return rg::evaluate(rs, truth).to_json().dump();
      },
      py::arg("results"), py::arg("labeled_lines"));

  m.def(
      "perturb",
      [](const std::vector<std::string>& lines, const std::string& mode, double level, std::uint64_t seed) {
        return rg::perturb(lines, rg::parse_perturb_mode(mode), level, seed);
      },
      py::arg("lines"), py::arg("mode"), py::arg("level"), py::arg("seed") = 1);
}
