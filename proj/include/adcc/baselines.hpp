#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "adcc/core.hpp"
#include "adcc/detect.hpp"

namespace adcc {

/// WCA scoring weights. Mobility and battery terms of the original algorithm
/// are out of model (static sensors, no power telemetry); the remaining two
/// weights must sum to 1.
struct WcaWeights {
  double w_degree = 0.7;
  double w_distance = 0.3;
  int ideal_degree = 4;
};

namespace detail {

inline void validate_wca(const WcaWeights& w) {
  if (w.w_degree < 0.0 || w.w_distance < 0.0 || std::abs(w.w_degree + w.w_distance - 1.0) > 1e-9)
    throw error(errc::invalid_argument, "WCA weights must be nonnegative and sum to 1");
}

/// Hop distances from source over a local adjacency (unweighted BFS).
inline std::vector<int> hop_distances(
    const std::vector<std::vector<std::pair<std::uint32_t, double>>>& adj, std::uint32_t source) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<std::uint32_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const std::uint32_t u = queue.front();
    queue.pop_front();
    for (auto [v, w] : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Weighted Clustering Algorithm: score nodes by degree deviation from the
/// ideal plus summed neighbor BER; repeatedly elect the unclustered node of
/// minimum score as head and recruit its unclustered neighbors.
inline Partition wca(const Snapshot& snapshot, const WcaWeights& weights = {}) {
  detail::validate_wca(weights);
  detail::LocalGraph g = detail::LocalGraph::from(snapshot);
  const std::size_t n = g.n();
  if (n == 0) return Partition{};

  std::vector<double> ber_sum(n, 0.0);
  for (const Edge& e : snapshot.edges) {
    ber_sum[g.index_of(e.u)] += e.mean_ber;
    ber_sum[g.index_of(e.v)] += e.mean_ber;
  }
  std::vector<double> score(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double degree_term = std::abs(static_cast<double>(g.adj[v].size()) -
                                        static_cast<double>(weights.ideal_degree));
    score[v] = weights.w_degree * degree_term + weights.w_distance * ber_sum[v];
  }

  std::vector<int> cluster(n, -1);
  int next_cluster = 0;
  for (;;) {
    std::size_t head = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (cluster[v] >= 0) continue;
      if (head == n || score[v] < score[head]) head = v;  // ties keep the smallest id
    }
    if (head == n) break;
    cluster[head] = next_cluster;
    for (auto [v, w] : g.adj[head])
      if (cluster[v] < 0) cluster[v] = next_cluster;
    ++next_cluster;
  }
  return detail::to_partition(g.ids, cluster);
}

/// Greedy weakly connected dominating set: per component, grow the dominator
/// set by maximum uncovered coverage (closed neighborhoods, ties by smallest
/// id), restricted after the first pick to nodes in the closed neighborhood of
/// the covered set so the weakly induced subgraph stays connected. Dominated
/// nodes join their nearest dominator by hops, ties by smallest dominator id.
inline Partition wcds(const Snapshot& snapshot) {
  detail::LocalGraph g = detail::LocalGraph::from(snapshot);
  const std::size_t n = g.n();
  if (n == 0) return Partition{};

  std::vector<char> covered(n, 0);
  std::vector<std::uint32_t> dominators;
  const auto components = connected_components(snapshot);
  for (const auto& comp : components) {
    std::vector<std::uint32_t> members;
    for (NodeId id : comp) members.push_back(g.index_of(id));
    std::size_t uncovered = members.size();
    bool first = true;
    while (uncovered > 0) {
      std::uint32_t best = 0;
      std::size_t best_cover = 0;
      bool found = false;
      for (std::uint32_t v : members) {
        if (!first) {
          bool eligible = covered[v];
          for (auto [w, wt] : g.adj[v])
            eligible = eligible || covered[w];
          if (!eligible) continue;
        }
        std::size_t cover = covered[v] ? 0 : 1;
        for (auto [w, wt] : g.adj[v]) cover += covered[w] ? 0 : 1;
        if (!found || cover > best_cover) {  // members are in ascending id order
          found = true;
          best = v;
          best_cover = cover;
        }
      }
      dominators.push_back(best);
      if (!covered[best]) {
        covered[best] = 1;
        --uncovered;
      }
      for (auto [w, wt] : g.adj[best]) {
        if (!covered[w]) {
          covered[w] = 1;
          --uncovered;
        }
      }
      first = false;
    }
  }
  std::sort(dominators.begin(), dominators.end());

  std::vector<int> cluster(n, -1);
  std::vector<int> best_dist(n, std::numeric_limits<int>::max());
  for (std::size_t d = 0; d < dominators.size(); ++d) {
    const auto dist = detail::hop_distances(g.adj, dominators[d]);
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] >= 0 && dist[v] < best_dist[v]) {  // ascending dominator id wins ties
        best_dist[v] = dist[v];
        cluster[v] = static_cast<int>(d);
      }
    }
  }
  return detail::to_partition(g.ids, cluster);
}

/// k-CONID: within every k-hop neighborhood the node with the best
/// (highest degree, lowest id) pair becomes a head; non-heads join the best
/// head within k hops. Leftover nodes without a reachable head repeat the
/// election among themselves.
inline Partition k_conid(const Snapshot& snapshot, int k) {
  if (k < 1) throw error(errc::invalid_argument, "k must be >= 1");
  detail::LocalGraph g = detail::LocalGraph::from(snapshot);
  const std::size_t n = g.n();
  if (n == 0) return Partition{};

  std::vector<std::vector<std::uint32_t>> within_k(n);  // ascending id, includes self
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto dist = detail::hop_distances(g.adj, v);
    for (std::uint32_t u = 0; u < n; ++u)
      if (dist[u] >= 0 && dist[u] <= k) within_k[v].push_back(u);
  }
  // Lexicographic comparison: higher degree first, then lower id.
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (g.adj[a].size() != g.adj[b].size()) return g.adj[a].size() > g.adj[b].size();
    return a < b;
  };

  std::vector<int> cluster(n, -1);
  int next_cluster = 0;
  std::size_t unassigned = n;
  while (unassigned > 0) {
    std::vector<std::uint32_t> heads;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (cluster[v] >= 0) continue;
      bool best_in_neighborhood = true;
      for (std::uint32_t u : within_k[v])
        if (cluster[u] < 0 && u != v && better(u, v)) best_in_neighborhood = false;
      if (best_in_neighborhood) heads.push_back(v);
    }
    std::vector<int> head_cluster(n, -1);
    for (std::uint32_t h : heads) {
      head_cluster[h] = next_cluster++;
      cluster[h] = head_cluster[h];
      --unassigned;
    }
    for (std::uint32_t v = 0; v < n; ++v) {
      if (cluster[v] >= 0) continue;
      std::uint32_t chosen = n;
      for (std::uint32_t u : within_k[v])
        if (head_cluster[u] >= 0 && (chosen == n || better(u, chosen))) chosen = u;
      if (chosen < n) {
        cluster[v] = head_cluster[chosen];
        --unassigned;
      }
    }
  }
  return detail::to_partition(g.ids, cluster);
}

}  // namespace adcc
