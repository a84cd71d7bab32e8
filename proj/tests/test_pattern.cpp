#include <gtest/gtest.h>

#include <cmath>

#include "rulegraph/charclass.hpp"
#include "rulegraph/error.hpp"
#include "rulegraph/pattern.hpp"
#include "test_util.hpp"

namespace rulegraph {
namespace {

TEST(CharClass, InventoryOrderIsFirstFit) {
  ByteSet digits;
  for (char c : std::string("0123")) digits.set(static_cast<unsigned char>(c));
  EXPECT_EQ(first_covering(digits), CharClassId::kDigit);

  ByteSet hex = digits;
  hex.set('a');
  EXPECT_EQ(first_covering(hex), CharClassId::kHex);

  ByteSet mixed;
  mixed.set('A');
  mixed.set('z');
  EXPECT_EQ(first_covering(mixed), CharClassId::kAlpha);

  ByteSet ctrl;
  ctrl.set('\n');
  EXPECT_FALSE(first_covering(ctrl).has_value());
}

TEST(CharClass, EveryClassIsItsOwnFirstCover) {
  for (CharClassId id : all_char_classes()) {
    EXPECT_EQ(first_covering(class_members(id)), id) << class_bracket(id);
    EXPECT_EQ(class_from_members(class_members(id)), id);
    EXPECT_EQ(class_size(id), class_members(id).count());
  }
  EXPECT_EQ(class_size(CharClassId::kDigit), 10u);
  EXPECT_EQ(class_size(CharClassId::kPrintable), 95u);
}

TEST(Pattern, LiteralRendersEscaped) {
  EXPECT_EQ(Pattern::literal("a.b").text(), "a\\.b");
  EXPECT_EQ(Pattern::literal("x(y)").text(), "x\\(y\\)");
  EXPECT_EQ(Pattern::literal("").text(), "");
  EXPECT_EQ(Pattern::literal("i-12345").literal_value(), "i-12345");
}

TEST(Pattern, NormalizationSortsAndFuses) {
  auto p = Pattern::from_units({LiteralUnion{{"b", "a", "b"}, false}});
  EXPECT_EQ(p.text(), "(?:a|b)");
  auto q = Pattern::from_units({LiteralUnion{{"ab"}, false}, LiteralUnion{{"cd"}, false}});
  EXPECT_EQ(q.text(), "abcd");
  EXPECT_EQ(q.units().size(), 1u);
  auto r = Pattern::from_units({LiteralUnion{{"", "x"}, false}});
  EXPECT_EQ(r.text(), "(?:x)?");
}

TEST(Pattern, ParseRoundTrip) {
  for (const char* text : {"(?:Attr|Model)Service-InstanceRole-[A-Z]{4,4}", "i-12[0-9]{3,3}", "(?:[a-f0-9]{2,8})?x",
                           "AMAZON-(?:02|AES)", "a\\.b\\x7f", "[A-Za-z0-9_.:/-]{1,3}"}) {
    auto p = parse(text);
    EXPECT_EQ(parse(p.text()), p) << text;
  }
  EXPECT_EQ(parse("[0-9]{3}").text(), "[0-9]{3,3}");
}

TEST(Pattern, ParseRejectsUnsupportedSyntax) {
  for (const char* text : {"a*", "a+", ".", "[0-9]{2,}", "[x-z]{1,2}", "\\d", "(a|b)", "[0-9]{3,1}"})
    EXPECT_THROW(parse(text), ParseError) << text;
}

TEST(Pattern, CostComponents) {
  auto p = parse("(?:Attr|Model)Service-InstanceRole-[A-Z]{4,4}");
  // Literal union: 9 characters + 1 alternation; suffix literal; class + repeat.
  EXPECT_EQ(node_count(p), 10u + std::string("Service-InstanceRole-").size() + 2u);
  EXPECT_EQ(word_count(p), BigCount(2) * BigCount(26 * 26 * 26 * 26));
  EXPECT_NEAR(log_word_count(p), std::log(2.0) + 4 * std::log(26.0), 1e-12);
  EXPECT_NEAR(cost(p).scalar(0.5), node_count(p) + 0.5 * log_word_count(p), 1e-12);
}

TEST(Pattern, CostLessTieBreaks) {
  auto a = parse("[0-9]{1,1}");
  auto b = parse("[a-z]{1,1}");
  // Same node count; the digit class has the smaller language.
  EXPECT_TRUE(cost_less(a, b));
  EXPECT_FALSE(cost_less(b, a));
  EXPECT_FALSE(cost_less(a, a));
}

TEST(Pattern, MatchesAgreesWithStdRegex) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 400; ++iter) {
    auto p = rgtest::random_pattern(rng);
    for (int w = 0; w < 20; ++w) {
      auto s = rgtest::random_string(rng, "ab01-xZ", 0, 7);
      ASSERT_EQ(matches(p, s), rgtest::oracle_match(p, s)) << p.text() << " on " << s;
    }
    for (const auto& s : sample_words(p, 5, iter)) {
      ASSERT_TRUE(matches(p, s)) << p.text() << " sampled " << s;
      ASSERT_TRUE(rgtest::oracle_match(p, s)) << p.text() << " sampled " << s;
    }
  }
}

TEST(Pattern, EnumerationMatchesCountsAndLengths) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    auto p = rgtest::random_pattern(rng);
    auto words = enumerate_words(p, 20000);
    if (!words) continue;
    std::set<std::string> distinct(words->begin(), words->end());
    EXPECT_EQ(distinct.size(), words->size());
    // The product count bounds the language and is exact when parses are unique.
    EXPECT_LE(BigCount(words->size()), word_count(p)) << p.text();
    for (const auto& w : *words) {
      ASSERT_TRUE(rgtest::oracle_match(p, w)) << p.text() << " enumerated " << w;
      EXPECT_GE(w.size(), min_length(p));
      EXPECT_LE(w.size(), max_length(p));
    }
  }
}

TEST(Pattern, WordCountIsExactForUnambiguousPattern) {
  auto p = parse("ab(?:x|yy)?[0-9]{1,2}");
  auto words = enumerate_words(p, 1000);
  ASSERT_TRUE(words.has_value());
  EXPECT_EQ(BigCount(words->size()), word_count(p));
  EXPECT_EQ(word_count(p), BigCount(3 * 110));
}

TEST(Pattern, EnumerationRespectsLimit) {
  EXPECT_FALSE(enumerate_words(parse("[a-z]{5,5}"), 1000).has_value());
  EXPECT_EQ(enumerate_words(Pattern{}, 10)->size(), 1u);
}

TEST(Pattern, IntersectsAgreesWithEnumeration) {
  std::mt19937_64 rng(13);
  int positives = 0;
  for (int iter = 0; iter < 1500; ++iter) {
    auto a = rgtest::random_pattern(rng);
    auto b = rgtest::random_pattern(rng);
    auto wa = enumerate_words(a, 5000);
    if (!wa) continue;
    bool expected = std::any_of(wa->begin(), wa->end(), [&](const std::string& w) { return rgtest::oracle_match(b, w); });
    positives += expected;
    ASSERT_EQ(intersects(a, b), expected) << a.text() << " vs " << b.text();
    ASSERT_EQ(intersects(b, a), expected);
  }
  EXPECT_GT(positives, 50);
}

TEST(Pattern, GeneralizeAndMergeRepeatClasses) {
  auto rc = generalize_literals_to_rc(LiteralUnion{{"12345", "12a"}, false});
  ASSERT_TRUE(rc.has_value());
  EXPECT_EQ(rc->cls, CharClassId::kHex);
  EXPECT_EQ(rc->min, 3u);
  EXPECT_EQ(rc->max, 5u);
  EXPECT_FALSE(generalize_literals_to_rc(LiteralUnion{{"tab\there"}, false}).has_value());

  auto m = merge_rc(RepeatClass{CharClassId::kDigit, 2, 3, false}, RepeatClass{CharClassId::kUpper, 4, 4, true});
  EXPECT_EQ(m.cls, CharClassId::kAlnum);
  EXPECT_EQ(m.min, 2u);
  EXPECT_EQ(m.max, 4u);
  EXPECT_TRUE(m.optional);
}

TEST(Pattern, CompiledLiteralFastPath) {
  CompiledPattern lit(Pattern::literal("i-12345"));
  EXPECT_TRUE(lit("i-12345"));
  EXPECT_FALSE(lit("i-1234"));
  CompiledPattern rc(parse("i-[0-9]{5,5}"));
  EXPECT_TRUE(rc("i-99999"));
  EXPECT_FALSE(rc("i-9999a"));
}

TEST(Pattern, SamplingIsDeterministic) {
  auto p = parse("[a-z]{3,6}-[0-9]{2,2}");
  EXPECT_EQ(sample_words(p, 10, 5), sample_words(p, 10, 5));
  EXPECT_NE(sample_words(p, 10, 5), sample_words(p, 10, 6));
}

}  // namespace
}  // namespace rulegraph
