#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "trustnet/metrics.hpp"

using namespace trustnet;
using namespace trustnet::testing;

namespace {

SearchRecord search(int initiator, std::size_t attempts, std::size_t authentic_at) {
  return {P(initiator), attempts > 0, attempts, authentic_at};
}

std::vector<PeerDisposition> classes(std::size_t n, std::initializer_list<int> malicious) {
  std::vector<PeerDisposition> d(n);
  for (int m : malicious) d[m].kind = PeerKind::malicious_a;
  return d;
}

std::vector<PeerId> all_but(std::size_t n, int skip) {
  std::vector<PeerId> out;
  for (std::uint32_t p = 0; p < n; ++p) {
    if (static_cast<int>(p) != skip) out.push_back(P(p));
  }
  return out;
}

}  // namespace

TEST(Metrics, AttemptRatio) {
  std::vector<SearchRecord> s(10, search(0, 1, 1));
  EXPECT_DOUBLE_EQ(*attempt_ratio(s), 1.0);
  for (int i = 0; i < 5; ++i) s[i] = search(0, 2, 2);
  EXPECT_DOUBLE_EQ(*attempt_ratio(s), 0.5);
  s.push_back({P(0), false, 0, 0});
  EXPECT_DOUBLE_EQ(*attempt_ratio(s), 0.5);
  EXPECT_FALSE(attempt_ratio(std::vector<SearchRecord>{{P(0), false, 0, 0}}).has_value());
}

TEST(Metrics, EffectiveAttemptRatio) {
  const auto d = classes(4, {2, 3});
  std::vector<SearchRecord> s{search(0, 1, 1), search(1, 1, 1), search(2, 2, 2), search(3, 2, 2)};
  EXPECT_NEAR(*effective_attempt_ratio(s, d), 50.0, 1e-12);
  s = {search(0, 1, 1), search(2, 1, 1)};
  EXPECT_NEAR(*effective_attempt_ratio(s, d), 0.0, 1e-12);
  s = {search(0, 1, 1), search(2, 3, 0)};
  EXPECT_NEAR(*effective_attempt_ratio(s, d), 100.0, 1e-12);
  // Per-peer averaging: peer 0 has 1/1 and 1/2 -> 0.75.
  s = {search(0, 1, 1), search(0, 2, 2), search(2, 1, 1)};
  EXPECT_NEAR(*effective_attempt_ratio(s, d), -25.0, 1e-12);
  s = {search(0, 1, 1), search(1, 2, 2)};
  EXPECT_FALSE(effective_attempt_ratio(s, d).has_value());
}

TEST(Metrics, ClosenessCentrality) {
  auto g = graph(10, {{0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9}, {5, 6}, {7, 8}, {9, 5}}, 10.0);
  EXPECT_NEAR(closeness_centrality(g, P(5), all_but(10, 5), 15), 1.0 / 135.0, 1e-15);
  for (int leaf : {1, 2, 3, 4}) ASSERT_TRUE(g.add_community_edge(P(0), P(leaf)));
  const std::vector<PeerId> star{P(0), P(1), P(2), P(3), P(4)};
  EXPECT_NEAR(closeness_centrality(g, P(0), star, 15), 0.25, 1e-15);
  EXPECT_NEAR(closeness_centrality(g, P(1), star, 15), 1.0 / 7.0, 1e-15);
}

TEST(Metrics, ClusteringCoefficient) {
  // 0 links to 1..4; among them only 1-2 and 3-4 are community linked.
  auto g = graph(10, {{0, 5}, {0, 6}, {1, 5}, {2, 6}, {3, 7}, {4, 8}, {5, 9}, {1, 7}, {2, 8}, {3, 9}, {4, 9}}, 10.0);
  for (int n : {1, 2, 3, 4}) ASSERT_TRUE(g.add_community_edge(P(0), P(n)));
  EXPECT_DOUBLE_EQ(*clustering_coefficient(g, P(0)), 0.0);
  ASSERT_TRUE(g.add_community_edge(P(1), P(2)));
  ASSERT_TRUE(g.add_community_edge(P(3), P(4)));
  EXPECT_NEAR(*clustering_coefficient(g, P(0)), 4.0 / 12.0, 1e-15);
  EXPECT_NEAR(*clustering_coefficient(g, P(1)), 1.0, 1e-15);
  EXPECT_FALSE(clustering_coefficient(g, P(9)).has_value());
}

TEST(Metrics, ClusteringZeroWithoutNeighborLinks) {
  auto g = graph(7, {{0, 4}, {0, 5}, {0, 6}, {1, 4}, {2, 5}, {3, 6}});
  for (int n : {1, 2, 3}) ASSERT_TRUE(g.add_community_edge(P(0), P(n)));
  EXPECT_DOUBLE_EQ(*clustering_coefficient(g, P(0)), 0.0);
}

TEST(Metrics, LargestConnectedComponent) {
  auto g = graph(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}}, 10.0);
  auto libs = libraries(8);
  libs[7].categories = {2};
  EXPECT_NEAR(*largest_connected_component(g, libs, 1), 100.0 / 7.0, 1e-12);
  EXPECT_NEAR(*largest_connected_component(g, libs, 2), 100.0, 1e-12);
  EXPECT_FALSE(largest_connected_component(g, libs, 3).has_value());
  for (auto [a, b] : {std::pair{0, 2}, {2, 4}, {1, 3}, {3, 5}, {5, 0}}) ASSERT_TRUE(g.add_community_edge(P(a), P(b)));
  // Sharers 0..5 are one component, 6 is alone: 6 of 7.
  EXPECT_NEAR(*largest_connected_component(g, libs, 1), 600.0 / 7.0, 1e-12);
}

TEST(Metrics, LargestComponentTwoHalves) {
  auto g = graph(8, {{0, 4}, {1, 5}, {2, 6}, {3, 7}, {0, 7}}, 10.0);
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}, {6, 7}}) ASSERT_TRUE(g.add_community_edge(P(a), P(b)));
  EXPECT_NEAR(*largest_connected_component(g, libraries(8), 1), 50.0, 1e-12);
}

TEST(Metrics, BaselineReport) {
  auto net = network(generate_power_law(120, 3, 4), libraries(120), {1, 2, 3});
  std::vector<SearchRecord> s{search(0, 1, 1), {P(5), false, 0, 0}, search(1, 2, 2)};
  MetricsParams params;
  params.cc_sample = 0;
  params.categories = 2;
  const auto r = compute_report(0, net, s, params, 1);
  EXPECT_DOUBLE_EQ(*r.honest().aspd, 15.0);
  EXPECT_DOUBLE_EQ(*r.malicious().aspd, 15.0);
  EXPECT_NEAR(*r.honest().mean_cc, 1.0 / (15.0 * 119.0), 1e-15);
  EXPECT_DOUBLE_EQ(*r.honest().mean_ric, 1.0);
  EXPECT_FALSE(r.honest().mean_clc.has_value());
  EXPECT_EQ(r.honest().peers, 117u);
  EXPECT_EQ(r.malicious().peers, 3u);
  EXPECT_DOUBLE_EQ(*r.honest().qmr, 0.5);
  EXPECT_DOUBLE_EQ(*r.malicious().qmr, 0.0);
  EXPECT_NEAR(*r.ear, 50.0, 1e-12);
  EXPECT_EQ(r.counters.dfs_trust_queries, 0u);
  EXPECT_NEAR(*r.lcc[0], 100.0 / 120.0, 1e-12);
  EXPECT_FALSE(r.lcc[1].has_value());

  std::ostringstream out;
  write_metrics_header(out);
  write_metrics_rows(out, r);
  std::istringstream in(out.str());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Metrics, SampledPathsAreSeeded) {
  auto net = network(generate_power_law(300, 3, 4), libraries(300));
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const auto a = static_cast<std::uint32_t>(rng() % 300), b = static_cast<std::uint32_t>(rng() % 300);
    if (a != b) net.graph.add_community_edge(P(a), P(b));
  }
  MetricsParams params;
  params.cc_sample = 50;
  const auto a = compute_report(3, net, {}, params, 9);
  const auto b = compute_report(3, net, {}, params, 9);
  EXPECT_EQ(*a.honest().mean_cc, *b.honest().mean_cc);
  EXPECT_EQ(*a.honest().aspd, *b.honest().aspd);
  EXPECT_LT(*a.honest().aspd, 15.0);
  EXPECT_LE(*a.honest().mean_ric, 2.0);
}
