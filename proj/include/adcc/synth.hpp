#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "adcc/core.hpp"
#include "adcc/records.hpp"

namespace adcc {

struct BerDist {
  double mean = 0.05;
  double stddev = 0.02;
};

/// Planted-partition generator parameters, sized like the paper's datasets
/// (tens of nodes, hundreds to thousands of timestamps).
struct TemporalSynthConfig {
  int n_nodes = 0;
  int n_communities = 1;
  double p_in = 0.3;
  double p_out = 0.05;
  BerDist ber_in{0.05, 0.02};
  BerDist ber_out{0.3, 0.1};
  int n_timestamps = 1;
  double churn = 0.0;     // fraction of nodes re-assigned per tick
  double presence = 1.0;  // probability a node is active per tick
  std::uint64_t seed = 0;
};

namespace detail {

inline void validate_synth(const TemporalSynthConfig& c) {
  if (c.n_nodes < 1) throw error(errc::invalid_argument, "n_nodes must be >= 1");
  if (c.n_communities < 1 || c.n_communities > c.n_nodes)
    throw error(errc::invalid_argument, "need 1 <= n_communities <= n_nodes");
  if (!(c.p_out >= 0.0 && c.p_out < c.p_in && c.p_in <= 1.0))
    throw error(errc::invalid_argument, "need 0 <= p_out < p_in <= 1");
  for (const BerDist& d : {c.ber_in, c.ber_out})
    if (!(d.mean >= 0.0 && d.mean <= 1.0 && d.stddev >= 0.0))
      throw error(errc::invalid_argument, "ber mean must be in [0,1], stddev >= 0");
  if (c.n_timestamps < 1) throw error(errc::invalid_argument, "n_timestamps must be >= 1");
  if (!(c.churn >= 0.0 && c.churn <= 1.0))
    throw error(errc::invalid_argument, "churn must be in [0,1]");
  if (!(c.presence > 0.0 && c.presence <= 1.0))
    throw error(errc::invalid_argument, "presence must be in (0,1]");
}

inline double sample_ber(std::mt19937_64& rng, const BerDist& d) {
  if (d.stddev == 0.0) return std::clamp(d.mean, 0.0, 1.0);
  std::normal_distribution<double> dist(d.mean, d.stddev);
  return std::clamp(dist(rng), 0.0, 1.0);
}

inline std::vector<int> sample_distinct(std::mt19937_64& rng, int n, int count) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int j = 0; j < count; ++j) {
    std::uniform_int_distribution<int> pick(j, n - 1);
    std::swap(idx[j], idx[pick(rng)]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace detail

struct TemporalDataset {
  RecordSet records;
  std::vector<Partition> ground_truth;  // one per tick, over the active nodes
};

/// Per tick: sample active nodes, place intra-community edges with p_in and
/// inter-community edges with p_out, then churn a fixed fraction of nodes to
/// random communities. Fully deterministic for a fixed seed.
inline TemporalDataset generate_temporal(const TemporalSynthConfig& config) {
  detail::validate_synth(config);
  TemporalDataset out;
  for (int i = 0; i < config.n_nodes; ++i) out.records.names.intern("s" + std::to_string(i));

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<std::uint32_t> assign(config.n_nodes);
  for (int i = 0; i < config.n_nodes; ++i)
    assign[i] = static_cast<std::uint32_t>(i % config.n_communities);

  const int n_churn = static_cast<int>(
      std::ceil(config.churn * static_cast<double>(config.n_nodes)));

  for (int t = 0; t < config.n_timestamps; ++t) {
    std::vector<int> active;
    for (int i = 0; i < config.n_nodes; ++i)
      if (config.presence >= 1.0 || uni(rng) < config.presence) active.push_back(i);

    std::vector<std::pair<NodeId, std::uint32_t>> labels;
    for (int i : active) labels.emplace_back(static_cast<NodeId>(i), assign[i]);
    out.ground_truth.push_back(Partition::from_labels(std::move(labels)));

    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const int u = active[a], v = active[b];
        const bool same = assign[u] == assign[v];
        if (uni(rng) >= (same ? config.p_in : config.p_out)) continue;
        TimestampedRecord rec;
        rec.t = t;
        rec.src = static_cast<NodeId>(u);
        rec.dst = static_cast<NodeId>(v);
        rec.ber = detail::sample_ber(rng, same ? config.ber_in : config.ber_out);
        out.records.records.push_back(rec);
      }
    }

    if (config.churn > 0.0 && n_churn > 0) {
      std::uniform_int_distribution<std::uint32_t> pick_comm(
          0, static_cast<std::uint32_t>(config.n_communities - 1));
      for (int i : detail::sample_distinct(rng, config.n_nodes, n_churn))
        assign[i] = pick_comm(rng);
    }
  }
  return out;
}

struct MultiplexDataset {
  RecordSet records;
  Partition ground_truth;  // static community assignment over all sensors
};

/// Multi-channel variant: intra-community edges land on a layer with
/// probability proportional to layer_affinity[community][layer]; BER is drawn
/// from ber_in on the community's preferred layer and degraded (mean +0.2)
/// elsewhere. Inter-community edges pick a uniform layer with ber_out.
inline MultiplexDataset generate_multiplex(const TemporalSynthConfig& config,
                                           std::uint32_t n_layers,
                                           const std::vector<std::vector<double>>& layer_affinity) {
  detail::validate_synth(config);
  if (n_layers < 1) throw error(errc::invalid_argument, "n_layers must be >= 1");
  if (layer_affinity.size() != static_cast<std::size_t>(config.n_communities))
    throw error(errc::invalid_argument, "layer_affinity needs one row per community");
  std::vector<double> row_sum(layer_affinity.size(), 0.0);
  std::vector<std::uint32_t> preferred(layer_affinity.size(), 0);
  for (std::size_t c = 0; c < layer_affinity.size(); ++c) {
    if (layer_affinity[c].size() != n_layers)
      throw error(errc::invalid_argument, "layer_affinity needs one column per layer");
    for (std::uint32_t l = 0; l < n_layers; ++l) {
      const double a = layer_affinity[c][l];
      if (a < 0.0) throw error(errc::invalid_argument, "layer_affinity must be nonnegative");
      row_sum[c] += a;
      if (a > layer_affinity[c][preferred[c]]) preferred[c] = l;
    }
    if (!(row_sum[c] > 0.0)) throw error(errc::invalid_argument, "layer_affinity row is all zero");
  }

  MultiplexDataset out;
  std::vector<std::pair<NodeId, std::uint32_t>> labels;
  for (int i = 0; i < config.n_nodes; ++i) {
    out.records.names.intern("s" + std::to_string(i));
    labels.emplace_back(static_cast<NodeId>(i),
                        static_cast<std::uint32_t>(i % config.n_communities));
  }
  out.ground_truth = Partition::from_labels(std::move(labels));

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  BerDist degraded = config.ber_in;
  degraded.mean = std::min(degraded.mean + 0.2, 1.0);

  for (int t = 0; t < config.n_timestamps; ++t) {
    std::vector<int> active;
    for (int i = 0; i < config.n_nodes; ++i)
      if (config.presence >= 1.0 || uni(rng) < config.presence) active.push_back(i);
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const int u = active[a], v = active[b];
        const std::uint32_t cu = out.ground_truth.label_of(static_cast<NodeId>(u));
        const std::uint32_t cv = out.ground_truth.label_of(static_cast<NodeId>(v));
        TimestampedRecord rec;
        rec.t = t;
        rec.src = static_cast<NodeId>(u);
        rec.dst = static_cast<NodeId>(v);
        if (cu == cv) {
          if (uni(rng) >= config.p_in) continue;
          double r = uni(rng) * row_sum[cu];
          std::uint32_t layer = 0;
          for (; layer + 1 < n_layers; ++layer) {
            r -= layer_affinity[cu][layer];
            if (r < 0.0) break;
          }
          rec.channel = layer;
          rec.ber = detail::sample_ber(rng, layer == preferred[cu] ? config.ber_in : degraded);
        } else {
          if (uni(rng) >= config.p_out) continue;
          std::uniform_int_distribution<std::uint32_t> pick_layer(0, n_layers - 1);
          rec.channel = pick_layer(rng);
          rec.ber = detail::sample_ber(rng, config.ber_out);
        }
        out.records.records.push_back(rec);
      }
    }
  }
  return out;
}

}  // namespace adcc
