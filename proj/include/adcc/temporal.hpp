#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "adcc/core.hpp"
#include "adcc/detect.hpp"

namespace adcc {

struct Window {
  std::size_t start = 0;
  std::size_t len = 1;
};

/// Co-membership statistics over a window of per-timestamp partitions. A node
/// counts as present at tick t iff partition t covers it (per-timestamp
/// partitions cover exactly their snapshot's nodes).
class CoMembershipWindow {
 public:
  static CoMembershipWindow compute(std::span<const Partition> partitions, Window w) {
    if (w.len < 1 || w.start + w.len > partitions.size())
      throw error(errc::window_out_of_bounds,
                  "window [" + std::to_string(w.start) + ", +" + std::to_string(w.len) +
                      ") over " + std::to_string(partitions.size()) + " partitions");
    CoMembershipWindow out;
    out.window_ = w;
    for (std::size_t t = w.start; t < w.start + w.len; ++t)
      for (const auto& [node, label] : partitions[t].items()) out.nodes_.push_back(node);
    std::sort(out.nodes_.begin(), out.nodes_.end());
    out.nodes_.erase(std::unique(out.nodes_.begin(), out.nodes_.end()), out.nodes_.end());
    out.presence_.assign(out.nodes_.size(), 0);

    for (std::size_t t = w.start; t < w.start + w.len; ++t) {
      const auto& items = partitions[t].items();
      for (const auto& [node, label] : items) ++out.presence_[out.index_of(node)];
      for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
          auto& counts = out.pair_counts_[{items[i].first, items[j].first}];
          ++counts.second;  // both present
          if (items[i].second == items[j].second) ++counts.first;
        }
      }
    }
    return out;
  }

  const std::vector<NodeId>& nodes() const { return nodes_; }
  Window window() const { return window_; }
  std::size_t window_len() const { return window_.len; }

  std::uint32_t pair_same(NodeId u, NodeId v) const {
    auto it = pair_counts_.find(ordered(u, v));
    return it == pair_counts_.end() ? 0 : it->second.first;
  }

  /// Timestamps where u or v is present.
  std::uint32_t pair_seen(NodeId u, NodeId v) const {
    auto it = pair_counts_.find(ordered(u, v));
    const std::uint32_t both = it == pair_counts_.end() ? 0 : it->second.second;
    return presence_[index_of(u)] + presence_[index_of(v)] - both;
  }

  const std::map<std::pair<NodeId, NodeId>, std::pair<std::uint32_t, std::uint32_t>>& pair_counts()
      const {
    return pair_counts_;
  }

 private:
  static std::pair<NodeId, NodeId> ordered(NodeId u, NodeId v) {
    return {std::min(u, v), std::max(u, v)};
  }

  std::size_t index_of(NodeId n) const {
    return std::lower_bound(nodes_.begin(), nodes_.end(), n) - nodes_.begin();
  }

  Window window_;
  std::vector<NodeId> nodes_;
  std::vector<std::uint32_t> presence_;
  // (u, v) with u < v -> (timestamps same community, timestamps both present)
  std::map<std::pair<NodeId, NodeId>, std::pair<std::uint32_t, std::uint32_t>> pair_counts_;
};

/// One partition per snapshot, produced by the configured detector.
/// Independent snapshots are detected concurrently; results are positional, so
/// the outcome does not depend on scheduling.
inline std::vector<Partition> per_timestamp_partitions(const TemporalSeries& series,
                                                       const DetectorConfig& config) {
  std::vector<Partition> out(series.size());
  const unsigned hw = std::thread::hardware_concurrency();
  if (series.size() < 8 || hw <= 1) {
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = detect(series.snapshots[i], config);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < series.size(); i = next.fetch_add(1))
      out[i] = detect(series.snapshots[i], config);
  };
  std::vector<std::thread> pool;
  const unsigned n_threads = std::min<unsigned>(hw, 8);
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

/// Reconstructed graph of a window: edge weight J = pair_same / pair_seen
/// (denominator: timestamps where u or v appears), edges with J = 0 omitted.
/// mean_ber is the synthetic 1 - J so BER metrics stay total downstream.
inline Snapshot jaccard_cooccurrence(std::span<const Partition> partitions,
                                     const TemporalSeries& series, Window w) {
  if (partitions.size() != series.size())
    throw error(errc::invalid_argument, "one partition per snapshot required");
  const auto co = CoMembershipWindow::compute(partitions, w);
  std::vector<Edge> edges;
  for (const auto& [pair, counts] : co.pair_counts()) {
    if (counts.first == 0) continue;
    const double j = static_cast<double>(counts.first) /
                     static_cast<double>(co.pair_seen(pair.first, pair.second));
    Edge e;
    e.u = pair.first;
    e.v = pair.second;
    e.weight = j;
    e.mean_ber = 1.0 - j;
    edges.push_back(e);
  }
  return Snapshot::from_edges(series.snapshots[w.start].timestamp, std::move(edges), co.nodes());
}

/// Labeled pair for the ELM option: whether u and v should share a community
/// at the next timestamp.
struct PairLabel {
  NodeId u = 0;
  NodeId v = 0;
  bool together = false;
};

struct ElmConfig {
  int n_hidden = 32;
  double ridge = 1e-6;
  double edge_threshold = 0.5;  // scores below it emit no edge
  std::uint64_t seed = 0;
};

/// Extreme learning machine: a fixed random sigmoid hidden layer and a ridge
/// least-squares readout. Inputs are co-membership bit vectors over a window
/// (0 = same community at that tick).
class ElmModel {
 public:
  static ElmModel fit(const std::vector<std::vector<double>>& inputs,
                      const std::vector<double>& targets, const ElmConfig& config) {
    if (inputs.empty() || inputs.size() != targets.size())
      throw error(errc::invalid_argument, "ELM needs matched nonempty inputs and targets");
    ElmModel m;
    m.input_dim_ = static_cast<int>(inputs[0].size());
    m.n_hidden_ = config.n_hidden;
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    m.hidden_weights_.resize(m.n_hidden_, m.input_dim_);
    m.hidden_bias_.resize(m.n_hidden_);
    for (int h = 0; h < m.n_hidden_; ++h) {
      for (int i = 0; i < m.input_dim_; ++i) m.hidden_weights_(h, i) = uni(rng);
      m.hidden_bias_(h) = uni(rng);
    }
    const int n = static_cast<int>(inputs.size());
    Eigen::MatrixXd activations(n, m.n_hidden_);
    Eigen::VectorXd y(n);
    for (int r = 0; r < n; ++r) {
      activations.row(r) = m.hidden_activations(inputs[r]);
      y(r) = targets[r];
    }
    const Eigen::MatrixXd gram =
        activations.transpose() * activations +
        config.ridge * Eigen::MatrixXd::Identity(m.n_hidden_, m.n_hidden_);
    m.output_weights_ = gram.ldlt().solve(activations.transpose() * y);
    return m;
  }

  /// Togetherness score clamped to [0, 1].
  double predict(const std::vector<double>& input) const {
    const double raw = hidden_activations(input).dot(output_weights_);
    return std::clamp(raw, 0.0, 1.0);
  }

  int input_dim() const { return input_dim_; }

 private:
  Eigen::RowVectorXd hidden_activations(const std::vector<double>& input) const {
    if (static_cast<int>(input.size()) != input_dim_)
      throw error(errc::invalid_argument, "ELM input dimension mismatch");
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(input.data(), input_dim_);
    Eigen::VectorXd z = hidden_weights_ * x + hidden_bias_;
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); }).transpose();
  }

  int input_dim_ = 0;
  int n_hidden_ = 0;
  Eigen::MatrixXd hidden_weights_;
  Eigen::VectorXd hidden_bias_;
  Eigen::VectorXd output_weights_;
};

/// Co-membership bit vector of a pair over a window: 0 where both nodes are
/// present and share a community, 1 otherwise.
inline std::vector<double> comembership_bits(std::span<const Partition> partitions, Window w,
                                             NodeId u, NodeId v) {
  std::vector<double> bits(w.len, 1.0);
  for (std::size_t k = 0; k < w.len; ++k) {
    const Partition& p = partitions[w.start + k];
    auto lu = p.try_label(u);
    auto lv = p.try_label(v);
    if (lu && lv && *lu == *lv) bits[k] = 0.0;
  }
  return bits;
}

/// ELM-based reconstruction: trains on labeled pairs, scores every pair seen
/// in the window, and emits edges with weight = score for scores at or above
/// the threshold.
inline Snapshot elm_edge_weights(std::span<const Partition> partitions,
                                 const TemporalSeries& series, Window w,
                                 std::span<const PairLabel> labels, const ElmConfig& config) {
  bool saw_true = false, saw_false = false;
  for (const PairLabel& l : labels) (l.together ? saw_true : saw_false) = true;
  if (!saw_true || !saw_false)
    throw error(errc::degenerate_labels, "need both label classes to fit the ELM");

  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
  inputs.reserve(labels.size());
  for (const PairLabel& l : labels) {
    inputs.push_back(comembership_bits(partitions, w, l.u, l.v));
    targets.push_back(l.together ? 1.0 : 0.0);
  }
  const ElmModel model = ElmModel::fit(inputs, targets, config);

  const auto co = CoMembershipWindow::compute(partitions, w);
  std::vector<Edge> edges;
  const auto& nodes = co.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      // Every pair of window nodes has pair_seen > 0.
      const double score = model.predict(comembership_bits(partitions, w, nodes[i], nodes[j]));
      if (score < config.edge_threshold) continue;
      Edge e;
      e.u = nodes[i];
      e.v = nodes[j];
      e.weight = score;
      e.mean_ber = 1.0 - score;
      edges.push_back(e);
    }
  }
  return Snapshot::from_edges(series.snapshots[w.start].timestamp, std::move(edges), nodes);
}

/// Final clustering of a window: label propagation on the reconstructed graph.
inline Partition node_partition(const Snapshot& reconstructed, const DetectorConfig& config) {
  return lpa(reconstructed, config);
}

enum class Reconstruction { jaccard, elm };

struct TemporalResult {
  std::size_t window_start = 0;
  Partition partition;
};

/// Method 1 end to end: per-timestamp detection (computed once), window-wise
/// reconstruction (stride 1), and a final LPA partition per window.
inline std::vector<TemporalResult> run_temporal(const TemporalSeries& series,
                                                const DetectorConfig& config,
                                                std::size_t window_len,
                                                Reconstruction reconstruction,
                                                std::span<const PairLabel> labels = {},
                                                const ElmConfig* elm_config = nullptr) {
  if (window_len < 1 || window_len > series.size())
    throw error(errc::window_out_of_bounds,
                "window_len " + std::to_string(window_len) + " over series of " +
                    std::to_string(series.size()));
  if (reconstruction == Reconstruction::elm && labels.empty())
    throw error(errc::missing_labels, "elm reconstruction requires labels");

  ElmConfig elm = elm_config ? *elm_config : ElmConfig{.seed = config.seed};
  const std::vector<Partition> per_tick = per_timestamp_partitions(series, config);

  std::vector<TemporalResult> results;
  results.reserve(series.size() - window_len + 1);
  for (std::size_t start = 0; start + window_len <= series.size(); ++start) {
    const Window w{start, window_len};
    const Snapshot reconstructed = reconstruction == Reconstruction::jaccard
                                       ? jaccard_cooccurrence(per_tick, series, w)
                                       : elm_edge_weights(per_tick, series, w, labels, elm);
    results.push_back({start, node_partition(reconstructed, config)});
  }
  return results;
}

}  // namespace adcc
