#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "adcc/metrics.hpp"
#include "adcc/records.hpp"
#include "adcc/temporal.hpp"
#include "test_util.hpp"

using namespace adcc;

namespace {

// A series whose snapshots carry the given node sets (no edges); used where
// only presence and timestamps matter.
TemporalSeries presence_series(const std::vector<std::vector<NodeId>>& node_sets) {
  TemporalSeries series;
  for (std::size_t t = 0; t < node_sets.size(); ++t) {
    series.snapshots.push_back(
        Snapshot::from_edges(static_cast<std::int64_t>(t), {}, node_sets[t]));
    for (NodeId n : node_sets[t]) series.global_nodes.push_back(n);
  }
  std::sort(series.global_nodes.begin(), series.global_nodes.end());
  series.global_nodes.erase(
      std::unique(series.global_nodes.begin(), series.global_nodes.end()),
      series.global_nodes.end());
  return series;
}

TemporalSeries repeated_series(const Snapshot& s, std::size_t times) {
  TemporalSeries series;
  for (std::size_t t = 0; t < times; ++t) {
    Snapshot copy = s;
    copy.timestamp = static_cast<std::int64_t>(t);
    series.snapshots.push_back(std::move(copy));
  }
  series.global_nodes = s.nodes;
  return series;
}

TEST(PerTimestamp, IdenticalSnapshotsGiveIdenticalPartitions) {
  const TemporalSeries series = repeated_series(testutil::two_cliques_bridge(), 3);
  DetectorConfig config;
  config.seed = 11;
  const auto parts = per_timestamp_partitions(series, config);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0], parts[1]);
  EXPECT_EQ(parts[1], parts[2]);
}

TEST(PerTimestamp, AbsentNodeHasNoEntry) {
  std::istringstream csv("timestamp,src,dst,ber\n0,a,b,0.1\n1,a,c,0.1\n");
  RecordSet rs = parse_records_csv(csv);
  const TemporalSeries series = build_series(rs.records);
  const auto parts = per_timestamp_partitions(series, {});
  const NodeId c = *rs.names.find("c");
  EXPECT_FALSE(parts[0].try_label(c).has_value());
  EXPECT_TRUE(parts[1].try_label(c).has_value());
}

TEST(PerTimestamp, EmptySnapshotGivesEmptyPartition) {
  TemporalSeries series = presence_series({{0, 1}, {}});
  series.snapshots[0] = testutil::make_snapshot({{0, 1, 0.9}});
  const auto parts = per_timestamp_partitions(series, {});
  EXPECT_EQ(parts[0].size(), 2u);
  EXPECT_TRUE(parts[1].empty());
}

TEST(Jaccard, CoMemberThreeOfFourTicks) {
  // u, v present all 4 ticks, same community at 3 of them.
  std::vector<Partition> parts;
  for (int t = 0; t < 4; ++t)
    parts.push_back(Partition::from_labels({{0, 0}, {1, t < 3 ? 0u : 1u}}));
  const TemporalSeries series = presence_series({{0, 1}, {0, 1}, {0, 1}, {0, 1}});
  const Snapshot rec = jaccard_cooccurrence(parts, series, {0, 4});
  ASSERT_EQ(rec.edges.size(), 1u);
  EXPECT_DOUBLE_EQ(rec.edges[0].weight, 0.75);
  EXPECT_DOUBLE_EQ(rec.edges[0].mean_ber, 0.25);
}

TEST(Jaccard, UnionDenominatorPenalizesAbsence) {
  // u present 4 ticks; v present (and co-member) at 2 of them -> J = 2/4.
  std::vector<Partition> parts;
  parts.push_back(Partition::from_labels({{0, 0}, {1, 0}}));
  parts.push_back(Partition::from_labels({{0, 0}}));
  parts.push_back(Partition::from_labels({{0, 0}, {1, 0}}));
  parts.push_back(Partition::from_labels({{0, 0}}));
  const TemporalSeries series = presence_series({{0, 1}, {0}, {0, 1}, {0}});
  const Snapshot rec = jaccard_cooccurrence(parts, series, {0, 4});
  ASSERT_EQ(rec.edges.size(), 1u);
  EXPECT_DOUBLE_EQ(rec.edges[0].weight, 0.5);
}

TEST(Jaccard, NeverCoMemberEmitsNoEdge) {
  std::vector<Partition> parts(3, Partition::from_labels({{0, 0}, {1, 1}}));
  const TemporalSeries series = presence_series({{0, 1}, {0, 1}, {0, 1}});
  const Snapshot rec = jaccard_cooccurrence(parts, series, {0, 3});
  EXPECT_TRUE(rec.edges.empty());
  EXPECT_EQ(rec.nodes.size(), 2u);
}

TEST(Jaccard, WindowOutOfBoundsRejected) {
  std::vector<Partition> parts(3, Partition::from_labels({{0, 0}, {1, 0}}));
  const TemporalSeries series = presence_series({{0, 1}, {0, 1}, {0, 1}});
  EXPECT_THROW(jaccard_cooccurrence(parts, series, {2, 2}), error);
  EXPECT_THROW(jaccard_cooccurrence(parts, series, {0, 0}), error);
}

TEST(Jaccard, WeightsInUnitIntervalAndMonotone) {
  std::mt19937_64 rng(19);
  std::vector<NodeId> nodes{0, 1, 2, 3, 4};
  std::uniform_int_distribution<std::uint32_t> lab(0, 2);
  std::vector<Partition> parts;
  std::vector<std::vector<NodeId>> presence;
  for (int t = 0; t < 6; ++t) {
    std::vector<std::pair<NodeId, std::uint32_t>> items;
    std::vector<NodeId> present;
    for (NodeId n : nodes) {
      if (lab(rng) == 0 && n > 1) continue;  // nodes 0,1 always present
      items.emplace_back(n, lab(rng));
      present.push_back(n);
    }
    parts.push_back(Partition::from_labels(std::move(items)));
    presence.push_back(std::move(present));
  }
  TemporalSeries series = presence_series(presence);
  const Snapshot rec = jaccard_cooccurrence(parts, series, {0, 6});
  for (const Edge& e : rec.edges) {
    EXPECT_GT(e.weight, 0.0);
    EXPECT_LE(e.weight, 1.0);
  }

  // Append a tick where 0 and 1 are co-members: J(0,1) may not decrease.
  auto j_of = [](const Snapshot& s) {
    for (const Edge& e : s.edges)
      if (e.u == 0 && e.v == 1) return e.weight;
    return 0.0;
  };
  const double before = j_of(rec);
  parts.push_back(Partition::from_labels({{0, 0}, {1, 0}}));
  presence.push_back({0, 1});
  series = presence_series(presence);
  const double after = j_of(jaccard_cooccurrence(parts, series, {0, 7}));
  EXPECT_GE(after, before - 1e-12);
}

TEST(Elm, SeparableLabelsFitAndEmitEdges) {
  // Separable by majority bit: together pairs have mostly-zero vectors.
  std::vector<Partition> parts;
  for (int t = 0; t < 6; ++t) {
    std::vector<std::pair<NodeId, std::uint32_t>> items;
    for (NodeId n = 0; n < 10; ++n) items.emplace_back(n, n < 5 ? 0u : 1u);
    parts.push_back(Partition::from_labels(std::move(items)));
  }
  std::vector<std::vector<NodeId>> presence(6, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  const TemporalSeries series = presence_series(presence);

  std::vector<PairLabel> labels;
  for (NodeId u = 0; u < 10; ++u)
    for (NodeId v = u + 1; v < 10; ++v)
      labels.push_back({u, v, (u < 5) == (v < 5)});

  ElmConfig config;
  config.seed = 3;
  const Snapshot rec = elm_edge_weights(parts, series, {0, 6}, labels, config);

  // Training accuracy on the labeled pairs through the emitted graph.
  std::size_t correct = 0;
  for (const PairLabel& l : labels) {
    bool has_edge = false;
    for (const Edge& e : rec.edges)
      if (e.u == std::min(l.u, l.v) && e.v == std::max(l.u, l.v)) has_edge = true;
    if (has_edge == l.together) ++correct;
  }
  EXPECT_GE(static_cast<double>(correct) / labels.size(), 0.95);
}

TEST(Elm, AllZerosVectorPredictsTogether) {
  std::vector<Partition> parts;
  for (int t = 0; t < 4; ++t)
    parts.push_back(Partition::from_labels({{0, 0}, {1, 0}, {2, 1}, {3, 2}}));
  const TemporalSeries series = presence_series(
      {{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}});
  const std::vector<PairLabel> labels{{0, 1, true}, {2, 3, false}, {0, 2, false}, {1, 3, false}};
  ElmConfig config;
  config.seed = 5;
  const Snapshot rec = elm_edge_weights(parts, series, {0, 4}, labels, config);
  bool found = false;
  for (const Edge& e : rec.edges)
    if (e.u == 0 && e.v == 1) {
      found = true;
      EXPECT_GE(e.weight, 0.5);
    }
  EXPECT_TRUE(found);
}

TEST(Elm, SingleClassLabelsRejected) {
  std::vector<Partition> parts(2, Partition::from_labels({{0, 0}, {1, 0}}));
  const TemporalSeries series = presence_series({{0, 1}, {0, 1}});
  const std::vector<PairLabel> labels{{0, 1, true}};
  try {
    elm_edge_weights(parts, series, {0, 2}, labels, {});
    FAIL() << "expected degenerate_labels";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_labels);
  }
}

TEST(NodePartition, DisconnectedCliquesSplit) {
  const Snapshot rec = testutil::make_snapshot(
      {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}, {3, 5, 1.0}, {4, 5, 1.0}});
  DetectorConfig config;
  config.seed = 2;
  EXPECT_EQ(node_partition(rec, config).n_communities(), 2u);
}

TEST(NodePartition, CompleteUniformGraphIsOneCluster) {
  std::vector<testutil::WeightedEdge> edges;
  for (NodeId u = 0; u < 5; ++u)
    for (NodeId v = u + 1; v < 5; ++v) edges.push_back({u, v, 1.0});
  const Snapshot rec = testutil::make_snapshot(std::move(edges));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    DetectorConfig config;
    config.seed = seed;
    EXPECT_EQ(node_partition(rec, config).n_communities(), 1u) << "seed " << seed;
  }
}

TEST(NodePartition, EmptyGraphAllSingletons) {
  const Snapshot rec = testutil::make_snapshot({}, {0, 1, 2});
  EXPECT_EQ(node_partition(rec, {}).n_communities(), 3u);
}

TEST(RunTemporal, SlidingWindowCount) {
  const TemporalSeries series = repeated_series(testutil::two_cliques_bridge(), 5);
  DetectorConfig config;
  config.seed = 1;
  EXPECT_EQ(run_temporal(series, config, 2, Reconstruction::jaccard).size(), 4u);
  EXPECT_EQ(run_temporal(series, config, 5, Reconstruction::jaccard).size(), 1u);
}

TEST(RunTemporal, WindowValidation) {
  const TemporalSeries series = repeated_series(testutil::two_cliques_bridge(), 3);
  EXPECT_THROW(run_temporal(series, {}, 0, Reconstruction::jaccard), error);
  EXPECT_THROW(run_temporal(series, {}, 4, Reconstruction::jaccard), error);
}

TEST(RunTemporal, ElmWithoutLabelsRejected) {
  const TemporalSeries series = repeated_series(testutil::two_cliques_bridge(), 3);
  try {
    run_temporal(series, {}, 2, Reconstruction::elm);
    FAIL() << "expected missing_labels";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::missing_labels);
  }
}

TEST(RunTemporal, StaticSeriesIsPerfectlyStable) {
  const Snapshot base = testutil::two_cliques_bridge();
  const TemporalSeries series = repeated_series(base, 4);
  DetectorConfig config;
  config.seed = 13;
  const auto per_tick = per_timestamp_partitions(series, config);
  // On identical snapshots J is exactly 0 or 1.
  const Snapshot rec = jaccard_cooccurrence(per_tick, series, {0, 2});
  for (const Edge& e : rec.edges) EXPECT_DOUBLE_EQ(e.weight, 1.0);
  EXPECT_EQ(node_partition(rec, config), per_tick[0]);

  const auto results = run_temporal(series, config, 2, Reconstruction::jaccard);
  for (std::size_t i = 1; i < results.size(); ++i)
    EXPECT_EQ(results[i].partition, results[0].partition);
  EXPECT_EQ(results[0].partition, per_tick[0]);
}

}  // namespace
