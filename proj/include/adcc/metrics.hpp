#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <span>
#include <vector>

#include "adcc/core.hpp"

namespace adcc {

namespace detail {

/// Min-cost assignment on an n x m cost matrix, n <= m; every row is matched
/// to a distinct column. O(n^2 m) potentials method.
inline std::int64_t assignment_min_cost(const std::vector<std::vector<std::int64_t>>& a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 0;
  const int m = static_cast<int>(a[0].size());
  const std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      std::int64_t delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        std::int64_t cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::int64_t cost = 0;
  for (int j = 1; j <= m; ++j)
    if (p[j]) cost += a[p[j] - 1][j - 1];
  return cost;
}

/// Adjacency restricted to edges whose endpoints share a label; indices are
/// positions in graph.nodes.
inline std::vector<std::vector<std::pair<std::uint32_t, double>>> intra_community_adjacency(
    const Snapshot& graph, const Partition& partition, bool use_ber_lengths) {
  const std::size_t n = graph.nodes.size();
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
  auto index_of = [&](NodeId id) {
    return static_cast<std::uint32_t>(
        std::lower_bound(graph.nodes.begin(), graph.nodes.end(), id) - graph.nodes.begin());
  };
  for (const Edge& e : graph.edges) {
    if (partition.label_of(e.u) != partition.label_of(e.v)) continue;
    double len = use_ber_lengths ? e.mean_ber : e.weight;
    std::uint32_t a = index_of(e.u), b = index_of(e.v);
    adj[a].emplace_back(b, len);
    adj[b].emplace_back(a, len);
  }
  return adj;
}

/// Single-source shortest path lengths over a local adjacency.
inline std::vector<double> dijkstra(
    const std::vector<std::vector<std::pair<std::uint32_t, double>>>& adj, std::uint32_t source) {
  constexpr double kUnreached = std::numeric_limits<double>::infinity();
  std::vector<double> dist(adj.size(), kUnreached);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (auto [v, len] : adj[u]) {
      double nd = d + len;
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Weighted modularity Q = sum_i (e_ii - a_i^2): internal weight fraction per
/// community minus the squared fraction of weight incident to it.
inline double modularity(const Snapshot& graph, const Partition& partition) {
  const double total = graph.total_weight();
  if (!(total > 0.0)) throw error(errc::zero_weight_graph, "modularity needs positive total weight");
  std::vector<double> internal(partition.n_communities(), 0.0);
  std::vector<double> incident(partition.n_communities(), 0.0);
  for (const Edge& e : graph.edges) {
    const std::uint32_t lu = partition.label_of(e.u);
    const std::uint32_t lv = partition.label_of(e.v);
    if (lu == lv) internal[lu] += e.weight;
    incident[lu] += e.weight;
    incident[lv] += e.weight;
  }
  double q = 0.0;
  for (std::size_t i = 0; i < internal.size(); ++i) {
    const double a = incident[i] / (2.0 * total);
    q += internal[i] / total - a * a;
  }
  return q;
}

/// Mean of a per-graph metric with the spec's skip rule: graphs the metric is
/// undefined on are left out and the divisor reduced.
struct Averaged {
  double value = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

/// Q-bar over a series or layer set, one partition per graph. Zero-weight
/// graphs are skipped.
inline Averaged average_modularity(std::span<const Snapshot> graphs,
                                   std::span<const Partition> partitions) {
  if (graphs.size() != partitions.size())
    throw error(errc::invalid_argument, "one partition per graph required");
  Averaged out;
  double sum = 0.0;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (!(graphs[i].total_weight() > 0.0)) {
      ++out.skipped;
      continue;
    }
    sum += modularity(graphs[i], partitions[i]);
    ++out.used;
  }
  if (out.used == 0) throw error(errc::zero_weight_graph, "all graphs have zero weight");
  out.value = sum / static_cast<double>(out.used);
  return out;
}

/// Q-bar with one shared partition evaluated per graph.
inline Averaged average_modularity(std::span<const Snapshot> graphs, const Partition& partition) {
  std::vector<Partition> parts(graphs.size(), partition);
  return average_modularity(graphs, parts);
}

/// Edit distance between partitions: minimum node relabels under an optimal
/// injective matching of communities, restricted to the shared node set.
struct Variation {
  std::size_t count = 0;
  double normalized = 0.0;
};

inline Variation variation(const Partition& p1, const Partition& p2) {
  // Contingency table over shared nodes.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> table;
  std::size_t shared = 0;
  {
    auto it1 = p1.items().begin();
    auto it2 = p2.items().begin();
    while (it1 != p1.items().end() && it2 != p2.items().end()) {
      if (it1->first < it2->first) {
        ++it1;
      } else if (it2->first < it1->first) {
        ++it2;
      } else {
        ++table[{it1->second, it2->second}];
        ++shared;
        ++it1;
        ++it2;
      }
    }
  }
  Variation out;
  if (shared == 0) return out;

  std::vector<std::uint32_t> rows, cols;
  for (const auto& [key, cnt] : table) {
    rows.push_back(key.first);
    cols.push_back(key.second);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

  const std::size_t k = std::max(rows.size(), cols.size());
  std::vector<std::vector<std::int64_t>> cost(k, std::vector<std::int64_t>(k, 0));
  for (const auto& [key, cnt] : table) {
    std::size_t r = std::lower_bound(rows.begin(), rows.end(), key.first) - rows.begin();
    std::size_t c = std::lower_bound(cols.begin(), cols.end(), key.second) - cols.begin();
    cost[r][c] = -cnt;  // maximize overlap via min-cost assignment
  }
  const std::int64_t overlap = -detail::assignment_min_cost(cost);
  out.count = shared - static_cast<std::size_t>(overlap);
  out.normalized = static_cast<double>(out.count) / static_cast<double>(shared);
  return out;
}

/// Path cost model for average_ber. Additive sums raw edge BERs along the
/// path; survival composes 1 - prod(1 - ber_e).
enum class BerPathCost { additive, survival };

/// Average BER: inter-community edges removed, all-pairs shortest paths with
/// edge length = raw mean_ber, averaged over reachable unordered pairs; the
/// per-graph values (pair-count weighted over components) are then averaged
/// over graphs, skipping graphs with no reachable pair.
inline Averaged average_ber(std::span<const Snapshot> graphs, const Partition& partition,
                            BerPathCost cost_model = BerPathCost::additive) {
  Averaged out;
  double sum_over_graphs = 0.0;
  for (const Snapshot& graph : graphs) {
    auto adj = detail::intra_community_adjacency(graph, partition, /*use_ber_lengths=*/true);
    if (cost_model == BerPathCost::survival) {
      for (auto& nbrs : adj)
        for (auto& [v, len] : nbrs)
          len = len >= 1.0 ? std::numeric_limits<double>::infinity() : -std::log1p(-len);
    }
    double dist_sum = 0.0;
    std::size_t pairs = 0;
    for (std::uint32_t s = 0; s < adj.size(); ++s) {
      auto dist = detail::dijkstra(adj, s);
      for (std::uint32_t t = s + 1; t < adj.size(); ++t) {
        if (!std::isfinite(dist[t])) continue;
        dist_sum += cost_model == BerPathCost::survival ? 1.0 - std::exp(-dist[t]) : dist[t];
        ++pairs;
      }
    }
    if (pairs == 0) {
      ++out.skipped;
      continue;
    }
    sum_over_graphs += dist_sum / static_cast<double>(pairs);
    ++out.used;
  }
  if (out.used == 0) throw error(errc::no_pairs, "no reachable intra-community pair in any graph");
  out.value = sum_over_graphs / static_cast<double>(out.used);
  return out;
}

struct ObjectiveWeights {
  double lambda = 0.0;  // >= 0
  double gamma = 0.0;
};

/// Connectivity penalty of one graph under a partition: components after
/// removing inter-community edges, minus the number of distinct labels present.
inline std::size_t component_increment(const Snapshot& graph, const Partition& partition) {
  const auto comps = connected_components(graph, &partition);
  std::vector<std::uint32_t> present;
  for (NodeId n : graph.nodes) present.push_back(partition.label_of(n));
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  return comps.size() - present.size();
}

/// Objective L(C) = Q_bar + lambda * (N_cc - N_community) + gamma * BER. With
/// several graphs the penalty is the mean of per-graph increments; on a single
/// full-coverage graph it is exactly N_cc - N_community.
inline double objective(std::span<const Snapshot> graphs, const Partition& partition,
                        const ObjectiveWeights& weights) {
  if (weights.lambda < 0.0) throw error(errc::invalid_argument, "lambda must be >= 0");
  const double q_bar = average_modularity(graphs, partition).value;
  double penalty = 0.0;
  if (!graphs.empty()) {
    double sum = 0.0;
    for (const Snapshot& g : graphs) sum += static_cast<double>(component_increment(g, partition));
    penalty = sum / static_cast<double>(graphs.size());
  }
  const double ber = weights.gamma != 0.0 ? average_ber(graphs, partition).value : 0.0;
  return q_bar + weights.lambda * penalty + weights.gamma * ber;
}

/// Normalized mutual information over the shared node set, normalized by the
/// arithmetic mean of the entropies. Both entropies zero -> 1; exactly one
/// zero -> 0.
inline double nmi(const Partition& p1, const Partition& p2) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
  std::map<std::uint32_t, double> m1, m2;
  std::size_t shared = 0;
  std::vector<std::pair<NodeId, std::uint32_t>> shared1, shared2;
  auto it1 = p1.items().begin();
  auto it2 = p2.items().begin();
  while (it1 != p1.items().end() && it2 != p2.items().end()) {
    if (it1->first < it2->first) {
      ++it1;
    } else if (it2->first < it1->first) {
      ++it2;
    } else {
      ++joint[{it1->second, it2->second}];
      ++m1[it1->second];
      ++m2[it2->second];
      shared1.push_back(*it1);
      shared2.push_back(*it2);
      ++shared;
      ++it1;
      ++it2;
    }
  }
  if (shared == 0) throw error(errc::empty_intersection, "partitions share no nodes");
  // Exactly 1 iff equal up to relabeling on the shared set.
  if (Partition::from_labels(std::move(shared1)) == Partition::from_labels(std::move(shared2)))
    return 1.0;
  const double n = static_cast<double>(shared);
  auto entropy = [n](const std::map<std::uint32_t, double>& counts) {
    double h = 0.0;
    for (const auto& [label, c] : counts) h -= (c / n) * std::log(c / n);
    return h;
  };
  const double h1 = entropy(m1);
  const double h2 = entropy(m2);
  if (h1 == 0.0 && h2 == 0.0) return 1.0;
  if (h1 == 0.0 || h2 == 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    const double pxy = c / n;
    const double px = m1.at(key.first) / n;
    const double py = m2.at(key.second) / n;
    mi += pxy * std::log(pxy / (px * py));
  }
  const double value = 2.0 * mi / (h1 + h2);
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace adcc
