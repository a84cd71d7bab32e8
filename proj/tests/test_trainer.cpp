#include <gtest/gtest.h>

#include "rulegraph/detector.hpp"
#include "rulegraph/error.hpp"
#include "rulegraph/generator.hpp"
#include "rulegraph/jsonl.hpp"
#include "rulegraph/trainer.hpp"
#include "test_util.hpp"

namespace rulegraph {
namespace {

TEST(Train, MotivatingExampleYieldsSixRules) {
  auto c = generate(GeneratorSpec::preset_defaults("motivating"));
  auto events = parse_events(c.train, c.types);
  auto res = train(events, c.types);
  ASSERT_EQ(res.ruleset.rules().size(), 6u);
  EXPECT_TRUE(res.report.fixpoint);
  EXPECT_EQ(res.report.committed(), 2u);

  std::set<std::string> actor_patterns;
  for (const auto& r : res.ruleset.rules()) actor_patterns.insert(r.patterns[0].text());
  ASSERT_EQ(actor_patterns.size(), 2u);
  for (const auto& text : actor_patterns) {
    auto p = parse(text);
    const bool instance = matches(p, "AttrService-InstanceRole-BTDN");
    EXPECT_EQ(matches(p, "ModelService-InstanceRole-ZXWI"), instance);
    EXPECT_NE(matches(p, "AttrService-DataRole-QRIU"), instance);
    EXPECT_NE(matches(p, "ModelService-DataRole-AUIB"), instance);
  }
  EXPECT_TRUE(generalization_check(res.ruleset, events).empty());
}

TEST(Train, EmptyInputIsAnError) { EXPECT_THROW(train({}, TypeConfig{}), ValidationError); }

TEST(Train, InvalidConfigIsRejected) {
  TrainConfig cfg;
  cfg.sim.iterations = 1;
  EXPECT_THROW(train({}, TypeConfig{}, cfg), ValidationError);
}

TEST(Train, ObserverSeesUniqueGraphsAndEveryEventStaysMatched) {
  auto types = rgtest::random_corpus_types();
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto events = parse_events(rgtest::random_corpus(seed, 500), types);
    std::size_t commits = 0;
    auto res = train(events, types, {}, [&](const RuleHypergraph& g) {
      ++commits;
      ASSERT_TRUE(g.check_edge_uniqueness().empty());
    });
    EXPECT_EQ(commits, res.report.committed());
    EXPECT_TRUE(generalization_check(res.ruleset, events).empty()) << "seed " << seed;
    EXPECT_TRUE(validate_ruleset(res.ruleset).empty());
  }
}

TEST(Train, HigherThresholdNeverMergesMore) {
  auto types = rgtest::random_corpus_types();
  auto events = parse_events(rgtest::random_corpus(2, 500), types);
  TrainConfig loose, strict;
  loose.sim.merge_threshold = 0.3;
  strict.sim.merge_threshold = 0.99;
  auto a = train(events, types, loose);
  auto b = train(events, types, strict);
  EXPECT_LE(a.ruleset.rules().size(), b.ruleset.rules().size());
}

TEST(Train, ReportSerializes) {
  TrainReport r;
  r.rounds = 2;
  r.committed_full = 3;
  auto j = r.to_json();
  EXPECT_EQ(j["rounds"], 2);
  EXPECT_EQ(j["committed"], 3);
}

}  // namespace
}  // namespace rulegraph
