#include <gtest/gtest.h>

#include "rulegraph/synth.hpp"
#include "test_util.hpp"

namespace rulegraph {
namespace {

const Pattern kId1 = Pattern::literal("AttrService-InstanceRole-BTDN");
const Pattern kId2 = Pattern::literal("AttrService-DataRole-QRIU");
const Pattern kId3 = Pattern::literal("ModelService-DataRole-AUIB");
const Pattern kId4 = Pattern::literal("ModelService-InstanceRole-ZXWI");

TEST(SplitAligned, SeparatorsBecomeTheirOwnPairs) {
  auto pairs = split_aligned(kId1, kId4);
  ASSERT_TRUE(pairs.has_value());
  ASSERT_EQ(pairs->size(), 5u);
  EXPECT_EQ((*pairs)[0].first.text(), "AttrService");
  EXPECT_EQ((*pairs)[0].second.text(), "ModelService");
  EXPECT_EQ((*pairs)[1].first.text(), "-");
  EXPECT_EQ((*pairs)[2].first, (*pairs)[2].second);
  EXPECT_EQ((*pairs)[4].first.text(), "BTDN");
}

TEST(SplitAligned, DifferentSeparatorSequencesDoNotAlign) {
  EXPECT_FALSE(split_aligned(Pattern::literal("a-b"), Pattern::literal("a_b")).has_value());
  EXPECT_FALSE(split_aligned(Pattern::literal("abc"), Pattern::literal("a-b-c")).has_value());
}

TEST(MergeRegex, InstanceRoles) {
  auto r = merge_regex(kId1, kId4, {kId2, kId3});
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->text(), "(?:Attr|Model)Service-InstanceRole-[A-Z]{4,4}");
  EXPECT_TRUE(matches(*r, "AttrService-InstanceRole-BTDN"));
  EXPECT_FALSE(matches(*r, "AttrService-DataRole-QRIU"));
}

TEST(MergeRegex, NegativeForcesNarrowerPattern) {
  auto i1 = Pattern::literal("i-12345");
  auto i2 = Pattern::literal("i-12739");
  auto res = merge_regex_explain(i1, i2, {Pattern::literal("i-99999")});
  ASSERT_TRUE(res.winner.has_value());
  EXPECT_EQ(res.winner->text(), "i-12[0-9]{3,3}");
  bool saw_rejected_wide = false;
  for (const auto& c : res.candidates)
    if (c.pattern.text() == "i-[0-9]{5,5}") saw_rejected_wide = c.rejected;
  EXPECT_TRUE(saw_rejected_wide);
  // Without the negative the wider pattern is not needed either; the winner
  // is simply the cheapest candidate.
  auto free = merge_regex(i1, i2, {});
  ASSERT_TRUE(free.has_value());
  EXPECT_TRUE(matches(*free, "i-12345"));
}

TEST(MergeRegex, NoCandidateAvoidsNegatives) {
  auto a = Pattern::literal("ab");
  auto b = Pattern::literal("cd");
  // A negative equal to an input can never be avoided.
  EXPECT_FALSE(merge_regex(a, b, {a}).has_value());
}

TEST(MergeRegex, CandidatesAreSortedAndWinnerIsFirstAccepted) {
  auto res = merge_regex_explain(kId2, kId3, {kId1, kId4});
  ASSERT_TRUE(res.winner.has_value());
  for (std::size_t i = 1; i < res.candidates.size(); ++i)
    EXPECT_FALSE(cost_less(res.candidates[i].pattern, res.candidates[i - 1].pattern));
  for (const auto& c : res.candidates) {
    if (c.rejected) continue;
    EXPECT_EQ(c.pattern, *res.winner);
    break;
  }
}

TEST(MergeRegex, IdenticalInputsReturnThemselves) {
  auto r = merge_regex(kId1, kId1, {});
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, kId1);
}

TEST(MergeRegex, FuzzedResultsAreSound) {
  std::mt19937_64 rng(3);
  int some = 0;
  for (int iter = 0; iter < 600; ++iter) {
    auto a = rgtest::random_pattern(rng);
    auto b = rgtest::random_pattern(rng);
    std::vector<Pattern> negs;
    for (int n = iter % 3; n > 0; --n) negs.push_back(rgtest::random_pattern(rng));
    auto r = merge_regex(a, b, negs);
    if (!r) continue;
    ++some;
    for (const auto& w : sample_words(a, 8, iter)) ASSERT_TRUE(matches(*r, w)) << r->text() << " misses " << w;
    for (const auto& w : sample_words(b, 8, iter)) ASSERT_TRUE(matches(*r, w)) << r->text() << " misses " << w;
    for (const auto& n : negs) {
      ASSERT_FALSE(intersects(*r, n)) << r->text() << " intersects " << n.text();
      auto wn = enumerate_words(n, 10000);
      if (!wn) wn = sample_words(n, 64, iter);
      for (const auto& w : *wn) ASSERT_FALSE(rgtest::oracle_match(*r, w)) << r->text() << " hits negative " << w;
    }
  }
  EXPECT_GT(some, 300);
}

}  // namespace
}  // namespace rulegraph
