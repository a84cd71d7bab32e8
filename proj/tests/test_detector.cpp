#include <gtest/gtest.h>

#include <sstream>

#include "rulegraph/detector.hpp"
#include "rulegraph/error.hpp"
#include "rulegraph/generator.hpp"
#include "rulegraph/jsonl.hpp"
#include "rulegraph/ruleset.hpp"
#include "rulegraph/trainer.hpp"

namespace rulegraph {
namespace {

Ruleset two_rule_set() {
  Signature sig{{"actor", "actor"}, {"op", "op"}};
  std::vector<Rule> rules = {
      {"", 3, sig, {parse("(?:Attr|Model)Service-InstanceRole-[A-Z]{4,4}"), parse("(?:CreateInstance|DeleteInstance)")}},
      {"", 5, sig, {parse("(?:Attr|Model)Service-DataRole-[A-Z]{4,4}"), parse("StartInstance")}},
  };
  return Ruleset(rules, TypeConfig{});
}

TEST(Ruleset, CanonicalOrderAndIds) {
  auto rs = two_rule_set();
  ASSERT_EQ(rs.rules().size(), 2u);
  EXPECT_EQ(rs.rules()[0].support, 5u);
  EXPECT_EQ(rs.rules()[0].id, "r0");
  EXPECT_EQ(rs.rules()[1].id, "r1");
  EXPECT_EQ(rs.buckets().size(), 1u);
}

TEST(Ruleset, JsonRoundTripIsByteStable) {
  auto rs = two_rule_set();
  auto back = Ruleset::from_json(nlohmann::ordered_json::parse(rs.dump()));
  EXPECT_EQ(back.dump(), rs.dump());
  EXPECT_EQ(back.rules(), rs.rules());
  auto j = rs.to_json();
  EXPECT_EQ(j["version"], 1);
  EXPECT_EQ(j["rules"][0]["signature"][0][0], "actor");
  EXPECT_EQ(j["rules"][0]["patterns"]["op"], "StartInstance");
}

TEST(Ruleset, RejectsBadDocuments) {
  EXPECT_THROW(Ruleset::from_json(nlohmann::ordered_json::parse(R"({"version": 9, "rules": []})")), ValidationError);
  EXPECT_THROW(Ruleset::from_json(nlohmann::ordered_json::parse(
                   R"({"version": 1, "rules": [{"id": "x", "support": 1, "signature": [["a","a"]], "patterns": {"a": "a*"}}]})")),
               Error);
}

TEST(ValidateRuleset, CleanSetHasNoOverlap) { EXPECT_TRUE(validate_ruleset(two_rule_set()).empty()); }

TEST(ValidateRuleset, DetectsInjectedOverlap) {
  Signature sig{{"actor", "actor"}, {"op", "op"}};
  std::vector<Rule> rules = {
      {"", 1, sig, {parse("i-12[0-9]{3,3}"), Pattern::literal("Get")}},
      {"", 1, sig, {parse("i-[0-9]{2,2}345"), parse("(?:Get|Put)")}},
      {"", 1, sig, {parse("i-[0-9]{2,2}345"), Pattern::literal("Delete")}},
  };
  auto overlaps = validate_ruleset(Ruleset(rules, TypeConfig{}));
  ASSERT_EQ(overlaps.size(), 1u);
}

class DetectorTest : public ::testing::Test {
 protected:
  DetectorTest() : det_(two_rule_set()) {}
  EventRecord event(const std::string& line) {
    Flattener f(det_.ruleset().types());
    return f.parse_line(line);
  }
  Detector det_;
};

TEST_F(DetectorTest, NormalEventNamesItsRule) {
  auto r = det_.match_event(event(R"({"actor": "AttrService-InstanceRole-BTDN", "op": "DeleteInstance"})"));
  EXPECT_EQ(r.verdict, Verdict::kNormal);
  EXPECT_EQ(r.rule_id, "r1");
  EXPECT_EQ(r.to_json().dump(), R"({"verdict":"normal","rule_id":"r1"})");
}

TEST_F(DetectorTest, ValueMismatchExplainsNearestRule) {
  auto r = det_.match_event(event(R"({"actor": "AttrService-DataRole-QRIU", "op": "DeleteInstance"})"));
  EXPECT_EQ(r.verdict, Verdict::kAnomalous);
  EXPECT_EQ(r.kind, AnomalyKind::kValueMismatch);
  // Each rule agrees on one key; the first in scan order explains.
  EXPECT_EQ(r.nearest_rules, (std::vector<std::string>{"r0", "r1"}));
  EXPECT_EQ(r.failed_keys, (std::vector<std::string>{"op"}));
}

TEST_F(DetectorTest, UnknownSignature) {
  auto r = det_.match_event(event(R"({"actor": "AttrService-DataRole-QRIU", "op": "StartInstance", "region": "x"})"));
  EXPECT_EQ(r.verdict, Verdict::kAnomalous);
  EXPECT_EQ(r.kind, AnomalyKind::kUnknownSignature);
  EXPECT_TRUE(r.nearest_rules.empty());
}

TEST_F(DetectorTest, StreamKeepsOrderAndCountsMalformed) {
  std::vector<std::string> lines = {
      R"({"actor": "AttrService-DataRole-QRIU", "op": "StartInstance"})",
      "not json",
      R"({"actor": "AttrService-DataRole-QRIU", "op": "DeleteInstance"})",
  };
  for (unsigned workers : {1u, 3u}) {
    DetectCounters c;
    auto out = det_.detect_lines(lines, c, workers);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0].verdict, Verdict::kNormal);
    EXPECT_EQ(out[1].verdict, Verdict::kMalformed);
    EXPECT_FALSE(out[1].error.empty());
    EXPECT_EQ(out[2].verdict, Verdict::kAnomalous);
    EXPECT_EQ(c.total, 3u);
    EXPECT_EQ(c.normal, 1u);
    EXPECT_EQ(c.malformed, 1u);
    EXPECT_EQ(c.anomalous, 1u);
  }
}

TEST(Detector, WorkerCountDoesNotChangeResults) {
  auto spec = GeneratorSpec::preset_defaults("synthetic");
  spec.train_events = 3000;
  spec.test_events = 2000;
  auto c = generate(spec);
  auto rs = train(parse_events(c.train, c.types), c.types).ruleset;
  Detector d(rs);
  DetectCounters c1, c4;
  auto a = d.detect_lines(c.test, c1, 1);
  auto b = d.detect_lines(c.test, c4, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i].to_json(), b[i].to_json());
  EXPECT_EQ(c1.anomalous, c4.anomalous);
}

TEST(Detector, MotivatingForbiddenPairIsFlagged) {
  auto c = generate(GeneratorSpec::preset_defaults("motivating"));
  auto rs = train(parse_events(c.train, c.types), c.types).ruleset;
  Detector d(rs);
  Flattener f(rs.types());
  auto r = d.match_event(f.parse_line(
      R"({"actor":{"id":"AttrService-DataRole-QRIU"},"api":{"operation":"DeleteInstance","request.data":{"instanceID":"i-12345","asnDesc":"AMAZON-AES"}}})"));
  EXPECT_EQ(r.verdict, Verdict::kAnomalous);
  EXPECT_EQ(r.kind, AnomalyKind::kValueMismatch);
  ASSERT_FALSE(r.failed_keys.empty());
  for (const auto& line : c.train) EXPECT_EQ(d.match_event(f.parse_line(line)).verdict, Verdict::kNormal);
}

TEST(ReadLines, SkipsBlankLines) {
  std::istringstream in("a\n\n  \nb\n");
  EXPECT_EQ(read_lines(in), (std::vector<std::string>{"a", "b"}));
}

}  // namespace
}  // namespace rulegraph
