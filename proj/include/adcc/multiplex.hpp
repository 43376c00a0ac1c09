#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "adcc/core.hpp"
#include "adcc/detect.hpp"
#include "adcc/metrics.hpp"

namespace adcc {

enum class MultiplexAlgorithm { mnlpa, flatten_louvain };

struct MultiplexDetectorConfig {
  MultiplexAlgorithm algorithm = MultiplexAlgorithm::mnlpa;
  // Coupling between copies of the same sensor. With one label per sensor it
  // is constant across candidate labels and cancels out of the argmax; kept
  // for per-copy labeling variants.
  double interlayer_coupling = 1.0;
  std::uint64_t seed = 0;
  int max_iterations = 100;
  double tolerance = 1e-9;
};

namespace detail {

/// Per-sensor adjacency with layer weights summed per pair.
inline std::vector<std::vector<std::pair<std::uint32_t, double>>> summed_adjacency(
    const MultiplexGraph& mg) {
  const std::size_t n = mg.sensors.size();
  auto index_of = [&](NodeId id) {
    return static_cast<std::uint32_t>(
        std::lower_bound(mg.sensors.begin(), mg.sensors.end(), id) - mg.sensors.begin());
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> merged;
  for (const auto& layer : mg.layers)
    for (const Edge& e : layer) merged[{index_of(e.u), index_of(e.v)}] += e.weight;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
  for (const auto& [pair, w] : merged) {
    adj[pair.first].emplace_back(pair.second, w);
    adj[pair.second].emplace_back(pair.first, w);
  }
  return adj;
}

/// Component count of a sensor subset restricted to one layer's
/// within-subset edges; sensors without such an edge are singletons.
inline std::size_t subset_layer_components(const MultiplexGraph& mg,
                                           const std::vector<NodeId>& members,
                                           std::uint32_t layer) {
  const std::size_t n = members.size();
  auto member_index = [&](NodeId id) -> std::size_t {
    auto it = std::lower_bound(members.begin(), members.end(), id);
    return it != members.end() && *it == id ? static_cast<std::size_t>(it - members.begin()) : n;
  };
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const Edge& e : mg.layers[layer]) {
    const std::size_t a = member_index(e.u);
    const std::size_t b = member_index(e.v);
    if (a == n || b == n) continue;
    const std::size_t ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

/// Mean raw BER over a subset's within-subset edges on one layer;
/// +infinity when the subset has no edge there.
inline double subset_layer_mean_ber(const MultiplexGraph& mg, const std::vector<NodeId>& members,
                                    std::uint32_t layer) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const Edge& e : mg.layers[layer]) {
    if (!std::binary_search(members.begin(), members.end(), e.u)) continue;
    if (!std::binary_search(members.begin(), members.end(), e.v)) continue;
    sum += e.mean_ber;
    ++count;
  }
  return count == 0 ? std::numeric_limits<double>::infinity()
                    : sum / static_cast<double>(count);
}

}  // namespace detail

/// MNLPA-style propagation labeling sensors instead of node copies: a sensor
/// adopts the label with the largest intra-layer incident weight summed over
/// all layers. Same sweep discipline as the single-layer LPA.
inline Partition multiplex_lpa(const MultiplexGraph& mg, const MultiplexDetectorConfig& config) {
  if (mg.sensors.empty()) return Partition{};
  const auto adj = detail::summed_adjacency(mg);
  const auto labels = detail::lpa_sweeps(adj, config.seed, config.max_iterations);
  return detail::to_partition(mg.sensors, labels);
}

/// Single-layer view of a multiplex graph: per-pair weights summed across
/// layers (so they may exceed 1), mean_ber averaged over the layers carrying
/// the pair.
inline Snapshot flatten_sum(const MultiplexGraph& mg) {
  std::map<std::pair<NodeId, NodeId>, std::pair<double, std::pair<double, std::size_t>>> merged;
  for (const auto& layer : mg.layers) {
    for (const Edge& e : layer) {
      auto& entry = merged[{e.u, e.v}];
      entry.first += e.weight;
      entry.second.first += e.mean_ber;
      entry.second.second += 1;
    }
  }
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [pair, acc] : merged) {
    Edge e;
    e.u = pair.first;
    e.v = pair.second;
    e.weight = acc.first;
    e.mean_ber = acc.second.first / static_cast<double>(acc.second.second);
    edges.push_back(e);
  }
  return Snapshot::from_edges(0, std::move(edges), mg.sensors);
}

/// Collapses the layers into a single graph with per-pair weights summed and
/// runs plain Louvain on it.
inline Partition flatten_louvain(const MultiplexGraph& mg, const MultiplexDetectorConfig& config) {
  const Snapshot flat = flatten_sum(mg);
  DetectorConfig dc;
  dc.algorithm = Algorithm::louvain;
  dc.seed = config.seed;
  dc.max_iterations = config.max_iterations;
  dc.tolerance = config.tolerance;
  return louvain(flat, dc);
}

inline Partition detect_multiplex(const MultiplexGraph& mg, const MultiplexDetectorConfig& config) {
  switch (config.algorithm) {
    case MultiplexAlgorithm::mnlpa: return multiplex_lpa(mg, config);
    case MultiplexAlgorithm::flatten_louvain: return flatten_louvain(mg, config);
  }
  throw error(errc::invalid_argument, "unknown multiplex algorithm");
}

struct ChannelAllocation {
  std::map<std::uint32_t, std::uint32_t> community_channel;
  std::vector<std::pair<NodeId, std::uint32_t>> sensor_channel;  // sorted by sensor
  std::vector<NodeId> isolated;  // no intra-community edge on the assigned channel
};

/// Greedy channel choice, largest community first (ties by smallest label).
/// A community picks the channel that minimizes its connected-component
/// increment, then maximizes intra-community quality (minimum mean BER), then
/// the lowest channel index; the first min(L, n_communities) communities must
/// occupy pairwise-distinct channels.
inline ChannelAllocation greedy_channel_allocation(const MultiplexGraph& mg,
                                                   const Partition& partition) {
  if (!partition.covers(mg.sensors))
    throw error(errc::coverage_error, "partition does not cover all sensors");
  const auto groups = partition.communities();
  std::vector<std::uint32_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (groups[a].size() != groups[b].size()) return groups[a].size() > groups[b].size();
    return a < b;
  });

  const std::uint32_t n_layers = mg.n_layers;
  const std::size_t constrained = std::min<std::size_t>(n_layers, groups.size());
  std::vector<char> taken(n_layers, 0);

  ChannelAllocation alloc;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const std::uint32_t comm = order[rank];
    const std::vector<NodeId>& members = groups[comm];
    std::uint32_t best_channel = n_layers;
    std::size_t best_components = 0;
    double best_ber = 0.0;
    for (std::uint32_t ch = 0; ch < n_layers; ++ch) {
      if (rank < constrained && taken[ch]) continue;
      const std::size_t comps = detail::subset_layer_components(mg, members, ch);
      const double ber = detail::subset_layer_mean_ber(mg, members, ch);
      if (best_channel == n_layers || comps < best_components ||
          (comps == best_components && ber < best_ber)) {
        best_channel = ch;
        best_components = comps;
        best_ber = ber;
      }
    }
    alloc.community_channel[comm] = best_channel;
    if (rank < constrained) taken[best_channel] = 1;
  }

  for (NodeId s : mg.sensors)
    alloc.sensor_channel.emplace_back(s, alloc.community_channel.at(partition.label_of(s)));

  for (const auto& [comm, ch] : alloc.community_channel) {
    const std::vector<NodeId>& members = groups[comm];
    std::vector<char> has_neighbor(members.size(), 0);
    for (const Edge& e : mg.layers[ch]) {
      auto iu = std::lower_bound(members.begin(), members.end(), e.u);
      auto iv = std::lower_bound(members.begin(), members.end(), e.v);
      if (iu == members.end() || *iu != e.u || iv == members.end() || *iv != e.v) continue;
      has_neighbor[iu - members.begin()] = 1;
      has_neighbor[iv - members.begin()] = 1;
    }
    for (std::size_t i = 0; i < members.size(); ++i)
      if (!has_neighbor[i]) alloc.isolated.push_back(members[i]);
  }
  std::sort(alloc.isolated.begin(), alloc.isolated.end());
  return alloc;
}

struct AllocationReport {
  double q_bar = 0.0;
  bool q_bar_defined = true;  // false when every assigned-layer subgraph has zero weight
  double penalty = 0.0;       // N_cc - N_community, always >= 0
  double avg_ber = 0.0;       // 0 when no community has a reachable pair
  double objective = 0.0;
  std::size_t n_cc = 0;
  std::size_t n_communities = 0;
  std::vector<std::size_t> community_sizes;
  std::size_t isolated_count = 0;
};

/// Evaluates L(C) = Q_bar + lambda (N_cc - N_community) + gamma BER on the
/// allocated layers: modularity over each layer's assigned subgraph, component
/// count per community on its layer, and intra-community shortest-path BER.
inline AllocationReport allocation_report(const MultiplexGraph& mg, const Partition& partition,
                                          const ChannelAllocation& alloc,
                                          const ObjectiveWeights& weights) {
  AllocationReport report;
  const auto groups = partition.communities();
  report.n_communities = partition.n_communities();
  for (const auto& g : groups) report.community_sizes.push_back(g.size());
  report.isolated_count = alloc.isolated.size();

  // Per-layer subgraphs over the sensors assigned to that layer.
  std::vector<Snapshot> layer_graphs;
  for (std::uint32_t ch = 0; ch < mg.n_layers; ++ch) {
    std::vector<NodeId> assigned;
    for (const auto& [sensor, sch] : alloc.sensor_channel)
      if (sch == ch) assigned.push_back(sensor);
    if (assigned.empty()) continue;
    std::vector<Edge> edges;
    for (const Edge& e : mg.layers[ch])
      if (std::binary_search(assigned.begin(), assigned.end(), e.u) &&
          std::binary_search(assigned.begin(), assigned.end(), e.v))
        edges.push_back(e);
    layer_graphs.push_back(Snapshot::from_edges(ch, std::move(edges), std::move(assigned)));
  }
  try {
    report.q_bar = average_modularity(layer_graphs, partition).value;
  } catch (const error& e) {
    if (e.code() != errc::zero_weight_graph) throw;
    report.q_bar = 0.0;
    report.q_bar_defined = false;
  }

  double ber_sum = 0.0;
  std::size_t ber_pairs = 0;
  for (const auto& [comm, ch] : alloc.community_channel) {
    const std::vector<NodeId>& members = groups[comm];
    report.n_cc += detail::subset_layer_components(mg, members, ch);

    const std::size_t n = members.size();
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
    auto member_index = [&](NodeId id) -> std::size_t {
      auto it = std::lower_bound(members.begin(), members.end(), id);
      return it != members.end() && *it == id ? static_cast<std::size_t>(it - members.begin()) : n;
    };
    for (const Edge& e : mg.layers[ch]) {
      const std::size_t a = member_index(e.u);
      const std::size_t b = member_index(e.v);
      if (a == n || b == n) continue;
      adj[a].emplace_back(static_cast<std::uint32_t>(b), e.mean_ber);
      adj[b].emplace_back(static_cast<std::uint32_t>(a), e.mean_ber);
    }
    for (std::uint32_t s = 0; s < n; ++s) {
      const auto dist = detail::dijkstra(adj, s);
      for (std::uint32_t t = s + 1; t < n; ++t) {
        if (!std::isfinite(dist[t])) continue;
        ber_sum += dist[t];
        ++ber_pairs;
      }
    }
  }
  report.penalty = static_cast<double>(report.n_cc) - static_cast<double>(report.n_communities);
  report.avg_ber = ber_pairs > 0 ? ber_sum / static_cast<double>(ber_pairs) : 0.0;
  report.objective =
      report.q_bar + weights.lambda * report.penalty + weights.gamma * report.avg_ber;
  return report;
}

}  // namespace adcc
