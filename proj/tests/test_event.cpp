#include <gtest/gtest.h>

#include "rulegraph/error.hpp"
#include "rulegraph/event.hpp"
#include "rulegraph/generator.hpp"
#include "rulegraph/type_config.hpp"

namespace rulegraph {
namespace {

using nlohmann::json;

TEST(GlobMatch, ShellSyntax) {
  EXPECT_TRUE(glob_match("api.*", "api.operation"));
  EXPECT_TRUE(glob_match("*instanceID", "api.request.data.instanceID"));
  EXPECT_TRUE(glob_match("a?c", "abc"));
  EXPECT_FALSE(glob_match("a?c", "ac"));
  EXPECT_TRUE(glob_match("[ab]x", "bx"));
}

TEST(TypeConfig, FirstMatchWinsAndDefaults) {
  TypeConfig cfg;
  cfg.assign("*.id", "Role").assign("actor.*", "Actor");
  EXPECT_EQ(cfg.type_of("actor.id"), "Role");
  EXPECT_EQ(cfg.type_of("actor.name"), "Actor");
  EXPECT_EQ(cfg.type_of("other"), "other");
  cfg.set_default("Text");
  EXPECT_EQ(cfg.type_of("other"), "Text");
}

TEST(TypeConfig, JsonRoundTrip) {
  auto cfg = preset_types();
  EXPECT_EQ(TypeConfig::from_json(cfg.to_json()), cfg);
  auto plain = TypeConfig::from_json(nlohmann::ordered_json::parse(R"({"a.*": "A", "b": "B"})"));
  EXPECT_EQ(plain.type_of("a.x"), "A");
  EXPECT_EQ(plain.type_of("b"), "B");
  EXPECT_THROW(TypeConfig::from_json(nlohmann::ordered_json::parse("[1]")), ValidationError);
}

TEST(TypeConfig, IncludeExcludeCategorical) {
  TypeConfig cfg;
  cfg.include("api.*").exclude("api.meta.*").categorical("Op");
  EXPECT_TRUE(cfg.keeps("api.x"));
  EXPECT_FALSE(cfg.keeps("api.meta.pad"));
  EXPECT_FALSE(cfg.keeps("other"));
  EXPECT_TRUE(cfg.is_categorical("Op"));
  EXPECT_FALSE(cfg.is_categorical("Role"));
}

TEST(Flatten, NestedKeysAndSortedTriples) {
  auto e = flatten_event(json::parse(R"({"b": 2, "a": {"y": true, "x": "v"}})"), TypeConfig{});
  ASSERT_EQ(e.triples.size(), 3u);
  EXPECT_EQ(e.triples[0].key, "a.x");
  EXPECT_EQ(e.triples[1].key, "a.y");
  EXPECT_EQ(e.triples[1].value.text(), "true");
  EXPECT_EQ(e.triples[2].key, "b");
  EXPECT_EQ(e.triples[2].value.text(), "2");
  EXPECT_EQ(e.value_at("a.x", "a.x").text(), "v");
  EXPECT_THROW(e.value_at("a.x", "other"), LookupError);
}

TEST(Flatten, ValuesAreLiteralsEvenWithMetacharacters) {
  auto e = flatten_event(json::parse(R"({"k": "a.*b", "z": 1})"), TypeConfig{});
  EXPECT_EQ(e.triples[0].value.literal_value(), "a.*b");
}

TEST(Flatten, LabelIsReadAndNotModeled) {
  TypeConfig cfg;
  Flattener f(cfg);
  auto e = f.parse_line(R"({"a": 1, "b": 2, "_label": "anomaly"})");
  EXPECT_EQ(e.label, Label::kAnomaly);
  EXPECT_EQ(e.triples.size(), 2u);
  EXPECT_EQ(f.parse_line(R"({"a": 1, "_label": "normal"})").label, Label::kNormal);
}

TEST(Flatten, MalformedInputRaisesIngestError) {
  TypeConfig cfg;
  Flattener f(cfg);
  EXPECT_THROW(f.parse_line("{not json"), IngestError);
  EXPECT_THROW(f.parse_line("[1, 2]"), IngestError);
  EXPECT_THROW(f.parse_line("{}"), IngestError);
  EXPECT_THROW(f.parse_line(R"({"a.b": 1, "a": {"b": 2}})"), IngestError);
  TypeConfig only_x;
  only_x.include("x");
  Flattener g(only_x);
  EXPECT_THROW(g.parse_line(R"({"y": 1})"), IngestError);
}

TEST(Flatten, SignatureOrdersByKeyAndType) {
  auto cfg = preset_types();
  auto e = flatten_event(json::parse(R"({"actor": {"id": "X"}, "api": {"operation": "Op"}, "meta": {"padding": "p"}})"), cfg);
  auto sig = e.signature();
  ASSERT_EQ(sig.size(), 2u);
  EXPECT_EQ(sig[0], SlotKey("actor.id", "Role"));
  EXPECT_EQ(sig[1], SlotKey("api.operation", "EventName"));
}

}  // namespace
}  // namespace rulegraph
