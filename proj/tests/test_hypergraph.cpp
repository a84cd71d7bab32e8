#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "rulegraph/error.hpp"
#include "rulegraph/generator.hpp"
#include "rulegraph/hypergraph.hpp"
#include "rulegraph/jsonl.hpp"
#include "test_util.hpp"

namespace rulegraph {
namespace {

class MotivatingGraph : public ::testing::Test {
 protected:
  void SetUp() override {
    auto spec = GeneratorSpec::preset_defaults("motivating");
    corpus_ = generate(spec);
    events_ = parse_events(corpus_.train, corpus_.types);
    g_ = RuleHypergraph::build(events_, corpus_.types);
    actor_ = slot_of("actor.id");
  }

  SlotId slot_of(const std::string& key) const {
    for (SlotId s = 0; s < g_.num_slots(); ++s)
      if (g_.slot_key(s).first == key) return s;
    ADD_FAILURE() << "no slot " << key;
    return 0;
  }

  VertexId id(const std::string& value) const { return *g_.find_vertex(actor_, Pattern::literal(value)); }

  Corpus corpus_;
  std::vector<EventRecord> events_;
  RuleHypergraph g_;
  SlotId actor_ = 0;
};

const char* kId1 = "AttrService-InstanceRole-BTDN";
const char* kId2 = "AttrService-DataRole-QRIU";
const char* kId3 = "ModelService-DataRole-AUIB";
const char* kId4 = "ModelService-InstanceRole-ZXWI";

TEST_F(MotivatingGraph, Shape) {
  EXPECT_EQ(g_.num_slots(), 4u);
  EXPECT_EQ(g_.num_live_edges(), 12u);
  // Four actors, five operations, one instance, one network.
  EXPECT_EQ(g_.num_live_vertices(), 11u);
  EXPECT_EQ(g_.live_vertices(actor_).size(), 4u);
  auto inst = g_.find_vertex(slot_of("api.request.data.instanceID"), Pattern::literal("i-12345"));
  ASSERT_TRUE(inst.has_value());
  EXPECT_EQ(g_.hyperedge_neighbors(*inst).size(), 12u);
  EXPECT_EQ(g_.hyperedge_neighbors(id(kId1)).size(), 3u);
  EXPECT_TRUE(g_.check_edge_uniqueness().empty());
  EXPECT_FALSE(g_.check_consistency().has_value());
}

TEST_F(MotivatingGraph, BuildIsCanonicalUnderOrderAndRepetition) {
  auto shuffled = events_;
  std::mt19937_64 rng(5);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  shuffled.insert(shuffled.end(), events_.begin(), events_.begin() + 5);
  auto g2 = RuleHypergraph::build(shuffled, corpus_.types);
  EXPECT_EQ(g2.debug_json(), g_.debug_json());
}

TEST_F(MotivatingGraph, NegativesAreTheOtherRoleFamily) {
  auto negs = g_.negative_examples(id(kId1), id(kId4));
  std::vector<std::string> texts;
  for (const auto& p : negs) texts.push_back(p.text());
  std::sort(texts.begin(), texts.end());
  texts.erase(std::unique(texts.begin(), texts.end()), texts.end());
  EXPECT_EQ(texts, (std::vector<std::string>{kId2, kId3}));
}

TEST_F(MotivatingGraph, AlignedSubgraphPairsSharedContexts) {
  EXPECT_EQ(g_.aligned_subgraph(id(kId1), id(kId4)).size(), 6u);
  // ID1 and ID2 only share GetInstanceStatus.
  EXPECT_EQ(g_.aligned_subgraph(id(kId1), id(kId2)).size(), 2u);
}

TEST_F(MotivatingGraph, FullMergeCoalescesIdenticalEdges) {
  auto merged = parse("(?:Attr|Model)Service-InstanceRole-[A-Z]{4,4}");
  auto v1 = id(kId1), v4 = id(kId4);
  auto out = g_.merge_vertices_full(v1, v4, merged);
  ASSERT_EQ(out.status, MergeStatus::kCommitted);
  EXPECT_EQ(out.coalesced, 3u);
  EXPECT_EQ(g_.num_live_edges(), 9u);
  EXPECT_FALSE(g_.vertex_live(v1));
  EXPECT_THROW(g_.hyperedge_neighbors(v1), LookupError);
  EXPECT_EQ(g_.vertex_value(out.merged), merged);
  for (EdgeId e : g_.hyperedge_neighbors(out.merged)) EXPECT_EQ(g_.edge_support(e), 2u);
  EXPECT_TRUE(g_.check_edge_uniqueness().empty());
  EXPECT_FALSE(g_.check_consistency().has_value());
}

TEST_F(MotivatingGraph, OverGeneralMergeIsRefusedAndLeavesGraphUntouched) {
  const auto before = g_.debug_json();
  auto out = g_.merge_vertices_full(id(kId1), id(kId4), parse("[A-Za-z]{4,5}Service-[A-Za-z]{4,8}Role-[A-Z]{4,4}"));
  EXPECT_EQ(out.status, MergeStatus::kUniquenessViolation);
  EXPECT_EQ(g_.debug_json(), before);
}

TEST_F(MotivatingGraph, PartialMergeTouchesOnlyTheSubgraph) {
  auto v1 = id(kId1), v2 = id(kId2);
  auto sub = g_.aligned_subgraph(v1, v2);
  auto out = g_.merge_vertices_partial(v1, v2, sub, parse("AttrService-(?:DataRole-QRIU|InstanceRole-BTDN)"));
  ASSERT_EQ(out.status, MergeStatus::kCommitted);
  EXPECT_EQ(out.coalesced, 1u);
  // Both originals survive in the edges outside the subgraph.
  EXPECT_TRUE(g_.vertex_live(v1));
  EXPECT_TRUE(g_.vertex_live(v2));
  EXPECT_EQ(g_.hyperedge_neighbors(v1).size(), 2u);
  EXPECT_TRUE(g_.check_edge_uniqueness().empty());
  EXPECT_FALSE(g_.check_consistency().has_value());
}

TEST(Hypergraph, RejectsSingleTripleEvents) {
  TypeConfig cfg;
  auto events = parse_events({R"({"only": 1})"}, cfg);
  EXPECT_THROW(RuleHypergraph::build(events, cfg), ValidationError);
}

TEST(Hypergraph, MergeOfVerticesInDifferentSlotsIsRejected) {
  TypeConfig cfg;
  auto g = RuleHypergraph::build(parse_events({R"({"a": "x", "b": "y"})"}, cfg), cfg);
  auto a = *g.find_vertex(0, Pattern::literal("x"));
  auto b = *g.find_vertex(1, Pattern::literal("y"));
  EXPECT_THROW(g.merge_vertices_full(a, b, parse("[a-z]{1,1}")), ValidationError);
}

TEST(Hypergraph, RandomMergesKeepIndexesConsistent) {
  auto types = rgtest::random_corpus_types();
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = RuleHypergraph::build(parse_events(rgtest::random_corpus(seed, 300), types), types);
    for (int step = 0; step < 40; ++step) {
      auto slot = static_cast<SlotId>(rng() % g.num_slots());
      if (g.slot_categorical(slot)) continue;
      auto vs = g.live_vertices(slot);
      if (vs.size() < 2) continue;
      auto a = vs[rng() % vs.size()], b = vs[rng() % vs.size()];
      if (a == b) continue;
      auto la = g.vertex_value(a).literal_value(), lb = g.vertex_value(b).literal_value();
      if (!la || !lb) continue;
      auto merged = Pattern::from_units({LiteralUnion{{std::string(*la), std::string(*lb)}, false}});
      g.merge_vertices_full(a, b, merged);
      ASSERT_TRUE(g.check_edge_uniqueness().empty());
      auto err = g.check_consistency();
      ASSERT_FALSE(err.has_value()) << *err;
    }
  }
}

}  // namespace
}  // namespace rulegraph
