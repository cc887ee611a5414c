#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "trustnet/adaptation.hpp"

using namespace trustnet;
using namespace trustnet::testing;

namespace {

std::vector<QueryResponse> from(std::initializer_list<int> peers) {
  std::vector<QueryResponse> out;
  for (int p : peers) out.push_back({P(p), FileId{1, 10}, 1});
  return out;
}

AdaptationParams rewiring(double p) {
  AdaptationParams a;
  a.degree_of_rewiring = p;
  return a;
}

}  // namespace

TEST(Adaptation, HonestFirstProviderSingleAttempt) {
  auto net = network(graph(4, {{0, 1}, {0, 2}, {1, 3}}), libraries(4, {1, 2}));
  Adaptation ad(net, rewiring(0.3));
  Rng rng(1);
  const auto attempts = ad.process_responses(P(0), FileId{1, 10}, from({1, 2}), rng);
  ASSERT_EQ(attempts.size(), 1u);
  EXPECT_EQ(attempts[0].outcome, Outcome::authentic);
}

TEST(Adaptation, FakeThenAuthentic) {
  auto g = graph(6, {{0, 3}, {1, 4}, {2, 5}, {1, 5}});
  ASSERT_TRUE(g.add_community_edge(P(0), P(1)));
  auto net = network(std::move(g), libraries(6, {1, 2}), {1});
  know(net, 0, 1, 2.5, 0.5);  // 0.7
  know(net, 0, 2, 2, 1);      // 0.6
  Adaptation ad(net, rewiring(1.0));
  Rng rng(4);
  const auto attempts = ad.process_responses(P(0), FileId{1, 10}, from({2, 1}), rng);
  ASSERT_EQ(attempts.size(), 2u);
  EXPECT_EQ(attempts[0].provider, P(1));
  EXPECT_EQ(attempts[0].outcome, Outcome::fake);
  EXPECT_EQ(attempts[0].edge_action, EdgeAction::del);
  EXPECT_EQ(attempts[1].provider, P(2));
  EXPECT_EQ(attempts[1].outcome, Outcome::authentic);
  EXPECT_EQ(attempts[1].edge_action, EdgeAction::add);
  EXPECT_EQ(*net.caches[0].peek(P(1)), (ReputationRecord{2.5, 1.5}));
  EXPECT_EQ(*net.caches[0].peek(P(2)), (ReputationRecord{3, 1}));
  EXPECT_FALSE(net.graph.has_community_edge(P(0), P(1)));
  EXPECT_TRUE(net.graph.has_community_edge(P(0), P(2)));
  EXPECT_EQ(net.counters.edges_deleted, 1u);
  EXPECT_EQ(net.counters.edges_added, 1u);
}

TEST(Adaptation, AllFakeTriesEverySource) {
  auto net = network(graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}), libraries(5, {1, 2, 3}), {1, 2, 3});
  Adaptation ad(net, rewiring(0.3));
  Rng rng(2);
  const auto attempts = ad.process_responses(P(0), FileId{1, 10}, from({1, 2, 3}), rng);
  ASSERT_EQ(attempts.size(), 3u);
  for (const auto& a : attempts) EXPECT_EQ(a.outcome, Outcome::fake);
}

TEST(Adaptation, DistrustedSourcesAreSkipped) {
  auto net = network(graph(3, {{0, 1}, {0, 2}}), libraries(3, {1, 2}), {1});
  know(net, 0, 1, 0, 1);
  know(net, 0, 2, 0, 3);
  Adaptation ad(net, rewiring(0.3));
  Rng rng(2);
  EXPECT_TRUE(ad.process_responses(P(0), FileId{1, 10}, from({1, 2}), rng).empty());
  EXPECT_EQ(*net.caches[0].peek(P(1)), (ReputationRecord{0, 1}));
}

TEST(Adaptation, FakeDeletesOnlyCommunityEdge) {
  auto g = graph(4, {{0, 1}, {2, 3}, {0, 2}});
  ASSERT_TRUE(g.add_community_edge(P(0), P(3)));
  auto net = network(std::move(g), libraries(4));
  Adaptation ad(net, rewiring(0.3));
  Rng rng(1);
  EXPECT_EQ(ad.rewire(P(0), P(3), Outcome::fake, rng), EdgeAction::del);
  EXPECT_FALSE(net.graph.has_community_edge(P(0), P(3)));
  EXPECT_EQ(ad.rewire(P(0), P(1), Outcome::fake, rng), EdgeAction::none);
  EXPECT_TRUE(net.graph.has_connectivity_edge(P(0), P(1)));
}

TEST(Adaptation, RewiringGate) {
  auto net = network(graph(4, {{0, 1}, {2, 3}}), libraries(4));
  Adaptation never(net, rewiring(0.0));
  Rng rng(1);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(never.rewire(P(0), P(2), Outcome::authentic, rng), EdgeAction::none);
  Adaptation always(net, rewiring(1.0));
  EXPECT_EQ(always.rewire(P(0), P(2), Outcome::authentic, rng), EdgeAction::add);
  EXPECT_LE(net.graph.ric(P(0)), 2.0);
  EXPECT_LE(net.graph.ric(P(2)), 2.0);
}

TEST(Adaptation, ApproveLink) {
  auto g = graph(5, {{0, 1}, {2, 3}, {3, 4}});
  ASSERT_TRUE(g.add_community_edge(P(1), P(2)));
  auto net = network(std::move(g), libraries(5));
  Adaptation ad(net, rewiring(1.0));
  Rng rng(1);
  EXPECT_FALSE(ad.approve_link(P(0), P(1), rng));  // 1 is at its cap
  know(net, 4, 0, 0, 1);
  EXPECT_NEAR(net.cached_trust(P(4), P(0)), 1.0 / 3.0, 1e-12);
  EXPECT_FALSE(ad.approve_link(P(0), P(4), rng));
  EXPECT_TRUE(ad.approve_link(P(0), P(3), rng));
}

TEST(Adaptation, RandomRewiringKeepsInvariants) {
  const auto g0 = generate_power_law(200, 3, 3);
  auto net = network(generate_power_law(200, 3, 3), libraries(200));
  net.graph.enable_mutation_checks(true);
  Adaptation ad(net, rewiring(0.5));
  Rng rng(9);
  for (int step = 0; step < 5000; ++step) {
    const PeerId i = P(static_cast<std::uint32_t>(rng() % 200));
    const PeerId j = P(static_cast<std::uint32_t>(rng() % 200));
    if (i == j) continue;
    const bool had = net.graph.has_community_edge(i, j);
    const Outcome o = uniform01(rng) < 0.3 ? Outcome::fake : Outcome::authentic;
    const EdgeAction a = ad.rewire(i, j, o, rng);
    if (o == Outcome::fake) EXPECT_NE(a, EdgeAction::add);
    if (o == Outcome::authentic) EXPECT_NE(a, EdgeAction::del);
    EXPECT_EQ(net.graph.has_community_edge(i, j), (had && o == Outcome::authentic) || a == EdgeAction::add);
  }
  EXPECT_EQ(net.graph.violation_count(), 0u);
  for (std::uint32_t p = 0; p < 200; ++p) {
    EXPECT_LE(net.graph.ric(P(p)), 2.0 + 1e-12);
    EXPECT_EQ(net.graph.connectivity_neighbors(P(p)).size(), g0.connectivity_neighbors(P(p)).size());
  }
}
