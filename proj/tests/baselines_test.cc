#include <gtest/gtest.h>

#include <random>

#include "adcc/baselines.hpp"
#include "test_util.hpp"

using namespace adcc;

namespace {

TEST(Wca, StarCenterElectedHead) {
  // K1,4 with uniform BER and ideal degree 4: the center scores lowest.
  const Snapshot g = testutil::make_snapshot(
      {{0, 1, 0.8}, {0, 2, 0.8}, {0, 3, 0.8}, {0, 4, 0.8}});
  const Partition p = wca(g, {});
  EXPECT_EQ(p.n_communities(), 1u);
  EXPECT_EQ(p.size(), 5u);
}

TEST(Wca, DisconnectedEdgesGiveTwoClusters) {
  const Snapshot g = testutil::make_snapshot({{0, 1, 0.9}, {2, 3, 0.9}});
  EXPECT_EQ(wca(g, {}).n_communities(), 2u);
}

TEST(Wca, EmptyGraphAllSingletons) {
  const Snapshot g = testutil::make_snapshot({}, {0, 1, 2});
  EXPECT_EQ(wca(g, {}).n_communities(), 3u);
}

TEST(Wca, InvalidWeightsRejected) {
  WcaWeights w;
  w.w_degree = 0.5;
  w.w_distance = 0.6;
  const Snapshot g = testutil::make_snapshot({{0, 1, 0.9}});
  EXPECT_THROW(wca(g, w), error);
}

TEST(Wca, BerScalingInvariantInDegreeOnlyRegime) {
  std::mt19937_64 rng(61);
  WcaWeights degree_only;
  degree_only.w_degree = 1.0;
  degree_only.w_distance = 0.0;
  for (int trial = 0; trial < 15; ++trial) {
    Snapshot g = testutil::random_graph(rng, 9, 0.4);
    Snapshot scaled = g;
    for (Edge& e : scaled.edges) e.mean_ber *= 0.37;
    EXPECT_EQ(wca(g, degree_only), wca(scaled, degree_only));
  }
}

TEST(Wcds, StarDominatedByCenter) {
  const Snapshot g = testutil::make_snapshot(
      {{0, 1, 0.8}, {0, 2, 0.8}, {0, 3, 0.8}, {0, 4, 0.8}});
  EXPECT_EQ(wcds(g).n_communities(), 1u);
}

TEST(Wcds, FiveNodePathGreedyTrace) {
  // a-b-c-d-e: dominators {b, d}; c joins b by the smallest-id tie-break.
  const Snapshot g = testutil::make_snapshot(
      {{0, 1, 0.9}, {1, 2, 0.9}, {2, 3, 0.9}, {3, 4, 0.9}});
  const Partition p = wcds(g);
  EXPECT_EQ(p.n_communities(), 2u);
  EXPECT_EQ(p.label_of(0), p.label_of(1));
  EXPECT_EQ(p.label_of(1), p.label_of(2));
  EXPECT_EQ(p.label_of(3), p.label_of(4));
  EXPECT_NE(p.label_of(2), p.label_of(3));
}

TEST(Wcds, SingleNodeIsItsOwnDominator) {
  const Snapshot g = testutil::make_snapshot({}, {3});
  const Partition p = wcds(g);
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(p.n_communities(), 1u);
}

TEST(Wcds, LongPathStaysWeaklyConnected) {
  // Dominator growth is restricted to the covered neighborhood, so the weakly
  // induced subgraph of each component is connected.
  std::vector<testutil::WeightedEdge> edges;
  for (NodeId i = 0; i + 1 < 7; ++i) edges.push_back({i, i + 1, 0.9});
  const Snapshot g = testutil::make_snapshot(std::move(edges));
  const Partition p = wcds(g);
  for (NodeId n = 0; n < 7; ++n) EXPECT_TRUE(p.try_label(n).has_value());
  EXPECT_EQ(p.n_communities(), 3u);  // dominators b, d, f
}

TEST(KConid, PathElectsTheMiddle) {
  const Snapshot g = testutil::make_snapshot({{0, 1, 0.9}, {1, 2, 0.9}});
  const Partition p = k_conid(g, 1);
  EXPECT_EQ(p.n_communities(), 1u);
}

TEST(KConid, LargeKGivesOneClusterPerComponent) {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 15; ++trial) {
    const Snapshot g = testutil::random_graph(rng, 10, 0.3);
    const Partition p = k_conid(g, static_cast<int>(g.nodes.size()));
    EXPECT_EQ(p.n_communities(), connected_components(g).size());
  }
}

TEST(KConid, DisconnectedTrianglesAreIndependent) {
  const Snapshot g = testutil::make_snapshot(
      {{0, 1, 0.9}, {0, 2, 0.9}, {1, 2, 0.9}, {3, 4, 0.9}, {3, 5, 0.9}, {4, 5, 0.9}});
  EXPECT_EQ(k_conid(g, 1).n_communities(), 2u);
}

TEST(KConid, InvalidKRejected) {
  const Snapshot g = testutil::make_snapshot({{0, 1, 0.9}});
  EXPECT_THROW(k_conid(g, 0), error);
}

TEST(Baselines, CoverExactlyTheNodeSet) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const Snapshot g = testutil::random_graph(rng, 11, 0.3);
    for (const Partition& p : {wca(g, {}), wcds(g), k_conid(g, 2)}) {
      ASSERT_EQ(p.size(), g.nodes.size());
      for (NodeId n : g.nodes) EXPECT_TRUE(p.try_label(n).has_value());
    }
  }
}

TEST(Baselines, Deterministic) {
  std::mt19937_64 rng(37);
  const Snapshot g = testutil::random_graph(rng, 12, 0.35);
  EXPECT_EQ(wca(g, {}), wca(g, {}));
  EXPECT_EQ(wcds(g), wcds(g));
  EXPECT_EQ(k_conid(g, 2), k_conid(g, 2));
}

}  // namespace
