#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "adcc/detect.hpp"
#include "adcc/metrics.hpp"
#include "adcc/records.hpp"
#include "adcc/synth.hpp"

using namespace adcc;

namespace {

TEST(GenerateTemporal, NoChurnNoCrossEdgesKeepsGroundTruthConstant) {
  TemporalSynthConfig config;
  config.n_nodes = 12;
  config.n_communities = 3;
  config.p_in = 0.8;
  config.p_out = 0.0;
  config.n_timestamps = 5;
  config.seed = 4;
  const TemporalDataset data = generate_temporal(config);
  ASSERT_EQ(data.ground_truth.size(), 5u);
  for (std::size_t t = 1; t < 5; ++t) EXPECT_EQ(data.ground_truth[t], data.ground_truth[0]);

  // Every snapshot component sits inside one ground-truth community.
  const TemporalSeries series = build_series(data.records.records);
  for (const Snapshot& s : series.snapshots) {
    for (const auto& comp : connected_components(s)) {
      for (std::size_t i = 1; i < comp.size(); ++i)
        EXPECT_EQ(data.ground_truth[0].label_of(comp[i]),
                  data.ground_truth[0].label_of(comp[0]));
    }
  }
}

TEST(GenerateTemporal, TableOneF1Shape) {
  TemporalSynthConfig config;
  config.n_nodes = 62;
  config.n_communities = 4;
  config.p_in = 0.3;
  config.p_out = 0.02;
  config.n_timestamps = 391;
  config.seed = 7;
  const TemporalDataset data = generate_temporal(config);
  EXPECT_EQ(data.records.names.size(), 62u);
  std::map<std::int64_t, std::size_t> ticks;
  for (const auto& r : data.records.records) ++ticks[r.t];
  EXPECT_EQ(ticks.size(), 391u);
  EXPECT_EQ(data.ground_truth.size(), 391u);
}

TEST(GenerateTemporal, DeterministicForFixedSeed) {
  TemporalSynthConfig config;
  config.n_nodes = 20;
  config.n_communities = 4;
  config.n_timestamps = 10;
  config.churn = 0.1;
  config.presence = 0.8;
  config.seed = 99;
  const TemporalDataset a = generate_temporal(config);
  const TemporalDataset b = generate_temporal(config);
  EXPECT_EQ(a.records.records, b.records.records);
  EXPECT_EQ(a.ground_truth.size(), b.ground_truth.size());
  for (std::size_t t = 0; t < a.ground_truth.size(); ++t)
    EXPECT_EQ(a.ground_truth[t], b.ground_truth[t]);

  std::ostringstream csv_a, csv_b;
  write_records_csv(csv_a, a.records);
  write_records_csv(csv_b, b.records);
  EXPECT_EQ(csv_a.str(), csv_b.str());
}

TEST(GenerateTemporal, OutputPassesParseValidation) {
  TemporalSynthConfig config;
  config.n_nodes = 15;
  config.n_communities = 3;
  config.n_timestamps = 8;
  config.churn = 0.2;
  config.presence = 0.7;
  config.seed = 5;
  const TemporalDataset data = generate_temporal(config);
  std::ostringstream csv;
  write_records_csv(csv, data.records);
  std::istringstream in(csv.str());
  const RecordSet reparsed = parse_records_csv(in);  // must not throw
  EXPECT_EQ(reparsed.records.size(), data.records.records.size());
  // Re-serialization is a fixpoint (names match record by record).
  std::ostringstream again;
  write_records_csv(again, reparsed);
  EXPECT_EQ(again.str(), csv.str());
}

TEST(GenerateTemporal, InvalidConfigsRejected) {
  TemporalSynthConfig config;
  config.n_nodes = 4;
  config.n_communities = 5;
  EXPECT_THROW(generate_temporal(config), error);
  config.n_communities = 2;
  config.p_in = 0.3;
  config.p_out = 0.5;
  EXPECT_THROW(generate_temporal(config), error);
}

TEST(GenerateTemporal, CleanSeparationRecoveredByEveryDetector) {
  TemporalSynthConfig config;
  config.n_nodes = 18;
  config.n_communities = 3;
  config.p_in = 1.0;
  config.p_out = 0.0;
  config.n_timestamps = 3;
  config.seed = 11;
  const TemporalDataset data = generate_temporal(config);
  const TemporalSeries series = build_series(data.records.records);
  for (Algorithm a :
       {Algorithm::louvain, Algorithm::girvan_newman, Algorithm::lpa, Algorithm::infomap}) {
    DetectorConfig c;
    c.algorithm = a;
    c.seed = 1;
    for (std::size_t t = 0; t < series.size(); ++t)
      EXPECT_DOUBLE_EQ(nmi(detect(series.snapshots[t], c), data.ground_truth[t]), 1.0);
  }
}

TEST(GenerateMultiplex, IdentityAffinityConcentratesLayers) {
  TemporalSynthConfig config;
  config.n_nodes = 18;
  config.n_communities = 3;
  config.p_in = 0.7;
  config.p_out = 0.0;
  config.n_timestamps = 10;
  config.seed = 3;
  const std::vector<std::vector<double>> affinity{
      {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  const MultiplexDataset data = generate_multiplex(config, 3, affinity);
  for (const auto& r : data.records.records) {
    ASSERT_TRUE(r.channel.has_value());
    EXPECT_EQ(*r.channel, data.ground_truth.label_of(r.src) % 3);
    EXPECT_EQ(data.ground_truth.label_of(r.src), data.ground_truth.label_of(r.dst));
  }
}

TEST(GenerateMultiplex, SectionFiveShape) {
  TemporalSynthConfig config;
  config.n_nodes = 20;
  config.n_communities = 3;
  config.p_in = 0.5;
  config.p_out = 0.05;
  config.n_timestamps = 62;
  config.seed = 12;
  const std::vector<std::vector<double>> affinity(3, std::vector<double>{1.0, 0.3, 0.3});
  const MultiplexDataset data = generate_multiplex(config, 3, affinity);
  std::map<std::int64_t, std::size_t> ticks;
  std::set<std::uint32_t> channels;
  for (const auto& r : data.records.records) {
    ++ticks[r.t];
    channels.insert(*r.channel);
  }
  EXPECT_EQ(ticks.size(), 62u);
  EXPECT_LE(channels.size(), 3u);
  EXPECT_GE(channels.size(), 2u);
}

TEST(GenerateMultiplex, UniformAffinitySpreadsLayersEvenly) {
  TemporalSynthConfig config;
  config.n_nodes = 20;
  config.n_communities = 2;
  config.p_in = 0.8;
  config.p_out = 0.0;
  config.n_timestamps = 30;
  config.seed = 8;
  const std::vector<std::vector<double>> affinity(2, std::vector<double>{1.0, 1.0});
  const MultiplexDataset data = generate_multiplex(config, 2, affinity);
  std::size_t counts[2] = {0, 0};
  for (const auto& r : data.records.records) ++counts[*r.channel];
  const double ratio = static_cast<double>(counts[0]) / static_cast<double>(counts[1]);
  EXPECT_GT(ratio, 0.8);
  EXPECT_LT(ratio, 1.25);
}

TEST(GenerateMultiplex, DimensionMismatchRejected) {
  TemporalSynthConfig config;
  config.n_nodes = 6;
  config.n_communities = 2;
  config.n_timestamps = 2;
  EXPECT_THROW(generate_multiplex(config, 2, {{1.0, 0.0}}), error);
  EXPECT_THROW(generate_multiplex(config, 2, {{1.0}, {1.0}}), error);
  EXPECT_THROW(generate_multiplex(config, 2, {{0.0, 0.0}, {1.0, 0.0}}), error);
}

}  // namespace
