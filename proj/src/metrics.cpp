#include "rulegraph/metrics.hpp"

#include "rulegraph/error.hpp"

namespace rulegraph {

Metrics Metrics::from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  const auto ratio = [](std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  m.f1 = (m.precision + m.recall) == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

nlohmann::ordered_json Metrics::to_json() const {
  return {{"tp", tp}, {"fp", fp}, {"fn", fn}, {"tn", tn}, {"precision", precision}, {"recall", recall}, {"f1", f1}};
}

Metrics evaluate(const std::vector<DetectionResult>& results, const std::vector<Label>& truth) {
  if (results.size() != truth.size())
    throw ValidationError("results and labels differ in length (" + std::to_string(results.size()) + " vs " +
                          std::to_string(truth.size()) + ")");
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const bool flagged = results[i].verdict != Verdict::kNormal;
    const bool anomaly = truth[i] == Label::kAnomaly;
    if (flagged && anomaly) ++tp;
    else if (flagged) ++fp;
    else if (anomaly) ++fn;
    else ++tn;
  }
  return Metrics::from_counts(tp, fp, fn, tn);
}

}  // namespace rulegraph
