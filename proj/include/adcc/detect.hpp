#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <vector>

#include "adcc/core.hpp"
#include "adcc/metrics.hpp"

namespace adcc {

enum class Algorithm { louvain, girvan_newman, lpa, infomap };

struct DetectorConfig {
  Algorithm algorithm = Algorithm::louvain;
  std::uint64_t seed = 0;
  int max_iterations = 100;
  double tolerance = 1e-9;  // minimum modularity/codelength gain to continue
};

namespace detail {

/// Snapshot reindexed to contiguous local node indices.
struct LocalGraph {
  std::vector<NodeId> ids;  // sorted; local index -> NodeId
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
  std::vector<double> strength;
  double total_weight = 0.0;

  static LocalGraph from(const Snapshot& s) {
    LocalGraph g;
    g.ids = s.nodes;
    g.adj.resize(g.ids.size());
    g.strength.assign(g.ids.size(), 0.0);
    for (const Edge& e : s.edges) {
      const std::uint32_t a = g.index_of(e.u);
      const std::uint32_t b = g.index_of(e.v);
      g.adj[a].emplace_back(b, e.weight);
      g.adj[b].emplace_back(a, e.weight);
      g.strength[a] += e.weight;
      g.strength[b] += e.weight;
      g.total_weight += e.weight;
    }
    return g;
  }

  std::uint32_t index_of(NodeId id) const {
    return static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  }

  std::size_t n() const { return ids.size(); }
};

inline Partition to_partition(const std::vector<NodeId>& ids, const std::vector<int>& labels) {
  std::vector<std::pair<NodeId, std::uint32_t>> pairs;
  pairs.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    pairs.emplace_back(ids[i], static_cast<std::uint32_t>(labels[i]));
  return Partition::from_labels(std::move(pairs));
}

inline std::vector<std::uint32_t> shuffled_order(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

/// Asynchronous weighted label propagation over a local adjacency. Each node
/// adopts the label with maximum total incident weight, smallest label on
/// ties; stops when a sweep changes nothing.
inline std::vector<int> lpa_sweeps(
    const std::vector<std::vector<std::pair<std::uint32_t, double>>>& adj, std::uint64_t seed,
    int max_iterations) {
  const std::size_t n = adj.size();
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  std::mt19937_64 rng(seed);
  for (int iter = 0; iter < max_iterations; ++iter) {
    const auto order = shuffled_order(n, rng);
    std::size_t changes = 0;
    for (std::uint32_t u : order) {
      if (adj[u].empty()) continue;
      std::map<int, double> score;
      for (auto [v, w] : adj[u]) score[labels[v]] += w;
      int best_label = labels[u];
      double best_weight = -1.0;
      for (const auto& [label, w] : score) {
        if (w > best_weight) {  // ascending label order makes ties pick the smallest
          best_weight = w;
          best_label = label;
        }
      }
      if (best_label != labels[u]) {
        labels[u] = best_label;
        ++changes;
      }
    }
    if (changes == 0) break;
  }
  return labels;
}

/// Aggregated graph for Louvain-style passes, in adjacency-matrix convention:
/// self_weight[u] = A_uu (twice the merged internal weight), strength is the
/// full A-row sum, two_m their total.
struct AggGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // distinct endpoints only
  std::vector<double> self_weight;
  std::vector<double> strength;
  double two_m = 0.0;

  std::size_t n() const { return adj.size(); }

  static AggGraph from(const LocalGraph& g) {
    AggGraph a;
    a.adj = g.adj;
    a.self_weight.assign(g.n(), 0.0);
    a.strength = g.strength;
    a.two_m = 2.0 * g.total_weight;
    return a;
  }
};

inline AggGraph aggregate(const AggGraph& g, const std::vector<int>& comm, int n_comm) {
  AggGraph out;
  out.adj.resize(n_comm);
  out.self_weight.assign(n_comm, 0.0);
  out.strength.assign(n_comm, 0.0);
  out.two_m = g.two_m;
  std::map<std::pair<int, int>, double> cross;
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    const int cu = comm[u];
    out.self_weight[cu] += g.self_weight[u];
    for (auto [v, w] : g.adj[u]) {
      if (v < u) continue;  // each undirected edge once
      const int cv = comm[v];
      if (cu == cv) {
        out.self_weight[cu] += 2.0 * w;
      } else {
        cross[{std::min(cu, cv), std::max(cu, cv)}] += w;
      }
    }
  }
  for (const auto& [key, w] : cross) {
    out.adj[key.first].emplace_back(static_cast<std::uint32_t>(key.second), w);
    out.adj[key.second].emplace_back(static_cast<std::uint32_t>(key.first), w);
  }
  for (std::uint32_t u = 0; u < out.n(); ++u) {
    out.strength[u] = out.self_weight[u];
    for (auto [v, w] : out.adj[u]) out.strength[u] += w;
  }
  return out;
}

inline int densify_labels(std::vector<int>& comm) {
  std::map<int, int> remap;
  for (int c : comm) remap.emplace(c, 0);
  int next = 0;
  for (auto& [old_label, new_label] : remap) new_label = next++;
  for (int& c : comm) c = remap.at(c);
  return next;
}

inline double modularity_of(const AggGraph& g, const std::vector<int>& comm) {
  const int k = 1 + *std::max_element(comm.begin(), comm.end());
  std::vector<double> a_in(k, 0.0), s_tot(k, 0.0);
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    a_in[comm[u]] += g.self_weight[u];
    s_tot[comm[u]] += g.strength[u];
    for (auto [v, w] : g.adj[u])
      if (comm[v] == comm[u]) a_in[comm[u]] += w;
  }
  double q = 0.0;
  for (int c = 0; c < k; ++c) {
    const double a = s_tot[c] / g.two_m;
    q += a_in[c] / g.two_m - a * a;
  }
  return q;
}

/// One Louvain pass: repeated seeded sweeps of best-gain local moves until a
/// sweep moves nothing. Returns whether any move happened.
inline bool louvain_one_level(const AggGraph& g, std::vector<int>& comm, std::mt19937_64& rng,
                              double tolerance, int max_iterations) {
  const std::size_t n = g.n();
  std::vector<double> s_tot(n, 0.0);
  for (std::uint32_t u = 0; u < n; ++u) s_tot[comm[u]] += g.strength[u];
  const double move_tol = tolerance * g.two_m / 2.0;  // per-move gain, Q units rescaled

  bool any_move = false;
  for (int iter = 0; iter < max_iterations; ++iter) {
    std::size_t moves = 0;
    for (std::uint32_t u : shuffled_order(n, rng)) {
      const int c_old = comm[u];
      s_tot[c_old] -= g.strength[u];
      std::map<int, double> w_to;
      w_to[c_old] += 0.0;
      for (auto [v, w] : g.adj[u]) w_to[comm[v]] += w;
      auto gain = [&](int c, double w_uc) {
        return w_uc - s_tot[c] * g.strength[u] / g.two_m;
      };
      const double gain_old = gain(c_old, w_to[c_old]);
      int best = c_old;
      double best_gain = gain_old;
      for (const auto& [c, w_uc] : w_to) {
        if (c == c_old) continue;
        const double gc = gain(c, w_uc);
        if (gc > best_gain + move_tol) {
          best_gain = gc;
          best = c;
        }
      }
      comm[u] = best;
      s_tot[best] += g.strength[u];
      if (best != c_old) ++moves;
    }
    if (moves > 0) any_move = true;
    if (moves == 0) break;
  }
  return any_move;
}

inline double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

/// Module bookkeeping for the two-level map equation over an AggGraph. The
/// partition-independent node-visit term is dropped; what is minimized is
/// L_var = plogp(q) - 2 sum_i plogp(q_i) + sum_i plogp(q_i + P_i).
struct MapState {
  const AggGraph* g = nullptr;
  std::vector<double> s_tot, a_in;
  std::vector<int> module_size;
  std::vector<int> free_ids;
  double sum_q = 0.0, sum_plogp_q = 0.0, sum_plogp_pc = 0.0;

  void init(const AggGraph& graph, const std::vector<int>& comm) {
    g = &graph;
    const std::size_t n = graph.n();
    s_tot.assign(n, 0.0);
    a_in.assign(n, 0.0);
    module_size.assign(n, 0);
    free_ids.clear();
    for (std::uint32_t u = 0; u < n; ++u) {
      s_tot[comm[u]] += graph.strength[u];
      a_in[comm[u]] += graph.self_weight[u];
      module_size[comm[u]] += 1;
      for (auto [v, w] : graph.adj[u])
        if (comm[v] == comm[u]) a_in[comm[u]] += w;
    }
    sum_q = sum_plogp_q = sum_plogp_pc = 0.0;
    for (std::uint32_t c = 0; c < n; ++c) {
      if (module_size[c] == 0) {
        free_ids.push_back(c);
        continue;
      }
      sum_q += q_of(c);
      sum_plogp_q += plogp(q_of(c));
      sum_plogp_pc += plogp(pc_of(c));
    }
  }

  double q_of(int c) const { return (s_tot[c] - a_in[c]) / g->two_m; }
  double pc_of(int c) const { return q_of(c) + s_tot[c] / g->two_m; }
  double codelength_var() const { return plogp(sum_q) - 2.0 * sum_plogp_q + sum_plogp_pc; }

  void detach(int c, std::uint32_t u, double w_uc) {
    sum_q -= q_of(c);
    sum_plogp_q -= plogp(q_of(c));
    sum_plogp_pc -= plogp(pc_of(c));
    s_tot[c] -= g->strength[u];
    a_in[c] -= 2.0 * w_uc + g->self_weight[u];
    module_size[c] -= 1;
    if (module_size[c] > 0) {
      sum_q += q_of(c);
      sum_plogp_q += plogp(q_of(c));
      sum_plogp_pc += plogp(pc_of(c));
    } else {
      free_ids.push_back(c);
    }
  }

  void attach(int c, std::uint32_t u, double w_uc) {
    if (module_size[c] > 0) {
      sum_q -= q_of(c);
      sum_plogp_q -= plogp(q_of(c));
      sum_plogp_pc -= plogp(pc_of(c));
    } else if (!free_ids.empty() && free_ids.back() == c) {
      free_ids.pop_back();
    }
    s_tot[c] += g->strength[u];
    a_in[c] += 2.0 * w_uc + g->self_weight[u];
    module_size[c] += 1;
    sum_q += q_of(c);
    sum_plogp_q += plogp(q_of(c));
    sum_plogp_pc += plogp(pc_of(c));
  }

  /// L_var if u (already detached) were inserted into module c.
  double trial(int c, std::uint32_t u, double w_uc) const {
    const double s = s_tot[c] + g->strength[u];
    const double a = a_in[c] + 2.0 * w_uc + g->self_weight[u];
    const double q_new = (s - a) / g->two_m;
    const double pc_new = q_new + s / g->two_m;
    double nq = sum_q + q_new;
    double npq = sum_plogp_q + plogp(q_new);
    double npc = sum_plogp_pc + plogp(pc_new);
    if (module_size[c] > 0) {
      nq -= q_of(c);
      npq -= plogp(q_of(c));
      npc -= plogp(pc_of(c));
    }
    return plogp(nq) - 2.0 * npq + npc;
  }
};

inline bool infomap_one_level(const AggGraph& g, std::vector<int>& comm, std::mt19937_64& rng,
                              double tolerance, int max_iterations) {
  const std::size_t n = g.n();
  MapState state;
  state.init(g, comm);
  bool any_move = false;
  for (int iter = 0; iter < max_iterations; ++iter) {
    std::size_t moves = 0;
    for (std::uint32_t u : shuffled_order(n, rng)) {
      if (!(g.strength[u] > 0.0)) continue;  // zero-flow nodes stay singletons
      const int c_old = comm[u];
      std::map<int, double> w_to;
      w_to[c_old] += 0.0;
      for (auto [v, w] : g.adj[u]) w_to[comm[v]] += w;
      state.detach(c_old, u, w_to[c_old]);
      // Candidates: neighbor modules, the old module, and one empty module.
      int empty_id = -1;
      for (auto it = state.free_ids.rbegin(); it != state.free_ids.rend(); ++it) {
        if (state.module_size[*it] == 0) {
          empty_id = *it;
          break;
        }
      }
      if (empty_id >= 0) w_to.emplace(empty_id, 0.0);
      const double stay_cost = state.trial(c_old, u, w_to[c_old]);
      int best = c_old;
      double best_cost = stay_cost;
      for (const auto& [c, w_uc] : w_to) {
        if (c == c_old) continue;
        const double cost = state.trial(c, u, w_uc);
        if (cost < best_cost - tolerance) {
          best_cost = cost;
          best = c;
        }
      }
      state.attach(best, u, w_to[best]);
      comm[u] = best;
      if (best != c_old) ++moves;
    }
    if (moves > 0) any_move = true;
    if (moves == 0) break;
  }
  return any_move;
}

/// Weighted edge betweenness (Brandes over Dijkstra) on the alive edge set;
/// shortest-path length of an edge is 1 / weight.
struct GnGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
  std::vector<double> length;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj;  // (neighbor, edge idx)
  std::vector<char> alive;
};

inline std::vector<double> edge_betweenness(const GnGraph& g) {
  std::vector<double> eb(g.ends.size(), 0.0);
  std::vector<double> dist(g.n), sigma(g.n), delta(g.n);
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> preds(g.n);
  std::vector<char> settled(g.n);
  std::vector<std::uint32_t> order;
  for (std::uint32_t s = 0; s < g.n; ++s) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(settled.begin(), settled.end(), 0);
    for (auto& p : preds) p.clear();
    order.clear();
    dist[s] = 0.0;
    sigma[s] = 1.0;
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (settled[u]) continue;
      settled[u] = 1;
      order.push_back(u);
      for (auto [v, eid] : g.adj[u]) {
        if (!g.alive[eid] || settled[v]) continue;
        const double nd = dist[u] + g.length[eid];
        if (!std::isfinite(dist[v])) {
          dist[v] = nd;
          sigma[v] = sigma[u];
          preds[v].assign(1, {u, eid});
          heap.emplace(nd, v);
          continue;
        }
        const double eps = 1e-12 * std::max(1.0, dist[v]);
        if (nd < dist[v] - eps) {
          dist[v] = nd;
          sigma[v] = sigma[u];
          preds[v].assign(1, {u, eid});
          heap.emplace(nd, v);
        } else if (std::abs(nd - dist[v]) <= eps) {
          sigma[v] += sigma[u];
          preds[v].emplace_back(u, eid);
        }
      }
    }
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::uint32_t w = *it;
      for (auto [u, eid] : preds[w]) {
        const double c = sigma[u] / sigma[w] * (1.0 + delta[w]);
        eb[eid] += c;
        delta[u] += c;
      }
    }
  }
  return eb;
}

inline std::vector<int> component_labels(const GnGraph& g, int& n_components) {
  std::vector<int> label(g.n, -1);
  int next = 0;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < g.n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.assign(1, s);
    while (!stack.empty()) {
      std::uint32_t u = stack.back();
      stack.pop_back();
      for (auto [v, eid] : g.adj[u]) {
        if (g.alive[eid] && label[v] < 0) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  n_components = next;
  return label;
}

}  // namespace detail

/// Weighted-modularity local moves plus graph aggregation, repeated until the
/// gain drops below tolerance. Each round re-runs node-level moves on the
/// original graph from the partition reached so far, then rebuilds the
/// hierarchy, until Q stops improving. Isolated nodes end up as singletons.
inline Partition louvain(const Snapshot& snapshot, const DetectorConfig& config) {
  detail::LocalGraph local = detail::LocalGraph::from(snapshot);
  if (local.n() == 0) return Partition{};
  if (!(local.total_weight > 0.0)) return Partition::singletons(snapshot.nodes);

  std::mt19937_64 rng(config.seed);
  const detail::AggGraph base = detail::AggGraph::from(local);

  // A handful of tries with distinct visit-order streams; greedy local moves
  // are order-sensitive, so keep the best-Q result.
  constexpr int kTries = 5;
  std::vector<int> best_assignment;
  double best_q = -2.0;
  for (int attempt = 0; attempt < kTries; ++attempt) {
    std::vector<int> node_to_super(local.n());
    std::iota(node_to_super.begin(), node_to_super.end(), 0);
    double q_prev = detail::modularity_of(base, node_to_super);

    for (int round = 0; round < config.max_iterations; ++round) {
      // Node-level moves over the original graph, seeded with the current
      // assignment (all singletons on the first round).
      std::vector<int> comm = node_to_super;
      bool moved = detail::louvain_one_level(base, comm, rng, config.tolerance,
                                             config.max_iterations);
      int k = detail::densify_labels(comm);
      node_to_super = comm;

      // Aggregation hierarchy on top of the refined assignment.
      detail::AggGraph agg = detail::aggregate(base, comm, k);
      for (int level = 0; level < config.max_iterations; ++level) {
        std::vector<int> level_comm(agg.n());
        std::iota(level_comm.begin(), level_comm.end(), 0);
        if (!detail::louvain_one_level(agg, level_comm, rng, config.tolerance,
                                       config.max_iterations))
          break;
        moved = true;
        k = detail::densify_labels(level_comm);
        for (int& c : node_to_super) c = level_comm[c];
        agg = detail::aggregate(agg, level_comm, k);
      }

      const double q_new = detail::modularity_of(base, node_to_super);
      if (!moved || q_new - q_prev < config.tolerance) break;
      q_prev = q_new;
    }
    if (q_prev > best_q) {
      best_q = q_prev;
      best_assignment = std::move(node_to_super);
    }
  }
  return detail::to_partition(local.ids, best_assignment);
}

/// Girvan-Newman: repeatedly remove the edge of maximum weighted betweenness
/// and keep the recorded component partition of maximum modularity on the
/// original graph.
inline Partition girvan_newman(const Snapshot& snapshot, const DetectorConfig& config) {
  (void)config;  // deterministic
  if (snapshot.nodes.empty()) return Partition{};
  if (snapshot.edges.empty()) return Partition::singletons(snapshot.nodes);

  detail::LocalGraph local = detail::LocalGraph::from(snapshot);
  detail::GnGraph g;
  g.n = local.n();
  g.adj.resize(g.n);
  for (const Edge& e : snapshot.edges) {
    const std::uint32_t a = local.index_of(e.u);
    const std::uint32_t b = local.index_of(e.v);
    const std::uint32_t eid = static_cast<std::uint32_t>(g.ends.size());
    g.ends.emplace_back(a, b);
    g.length.push_back(1.0 / e.weight);
    g.adj[a].emplace_back(b, eid);
    g.adj[b].emplace_back(a, eid);
  }
  g.alive.assign(g.ends.size(), 1);

  int n_components = 0;
  std::vector<int> labels = detail::component_labels(g, n_components);
  Partition best = detail::to_partition(local.ids, labels);
  double best_q = modularity(snapshot, best);
  int recorded_components = n_components;

  std::size_t alive_count = g.ends.size();
  while (alive_count > 0) {
    const auto eb = detail::edge_betweenness(g);
    double max_eb = -1.0;
    for (std::size_t e = 0; e < eb.size(); ++e)
      if (g.alive[e]) max_eb = std::max(max_eb, eb[e]);
    std::size_t victim = g.ends.size();
    const double tie = 1e-9 * std::max(1.0, max_eb);
    for (std::size_t e = 0; e < eb.size(); ++e) {
      if (g.alive[e] && eb[e] >= max_eb - tie) {
        victim = e;  // edges are sorted by (u, v); first hit is the smallest
        break;
      }
    }
    g.alive[victim] = 0;
    --alive_count;
    labels = detail::component_labels(g, n_components);
    if (n_components > recorded_components) {
      recorded_components = n_components;
      Partition p = detail::to_partition(local.ids, labels);
      const double q = modularity(snapshot, p);
      if (q > best_q + 1e-15) {
        best_q = q;
        best = std::move(p);
      }
    }
  }
  return best;
}

/// Asynchronous weighted label propagation with seeded visit order.
inline Partition lpa(const Snapshot& snapshot, const DetectorConfig& config) {
  if (snapshot.nodes.empty()) return Partition{};
  detail::LocalGraph local = detail::LocalGraph::from(snapshot);
  const auto labels = detail::lpa_sweeps(local.adj, config.seed, config.max_iterations);
  return detail::to_partition(local.ids, labels);
}

/// Two-level map equation minimized by Louvain-style local moves on the
/// codelength, with aggregation rounds. Zero-edge graphs are all singletons.
inline Partition infomap_two_level(const Snapshot& snapshot, const DetectorConfig& config) {
  detail::LocalGraph local = detail::LocalGraph::from(snapshot);
  if (local.n() == 0) return Partition{};
  if (!(local.total_weight > 0.0)) return Partition::singletons(snapshot.nodes);

  std::mt19937_64 rng(config.seed);
  detail::AggGraph agg = detail::AggGraph::from(local);
  std::vector<int> node_to_super(local.n());
  std::iota(node_to_super.begin(), node_to_super.end(), 0);

  for (int level = 0; level < config.max_iterations; ++level) {
    std::vector<int> comm(agg.n());
    std::iota(comm.begin(), comm.end(), 0);
    detail::MapState before;
    before.init(agg, comm);
    const double l_before = before.codelength_var();
    const bool moved =
        detail::infomap_one_level(agg, comm, rng, config.tolerance, config.max_iterations);
    if (!moved) break;
    const int k = detail::densify_labels(comm);
    for (int& c : node_to_super) c = comm[c];
    detail::MapState after;
    after.init(agg, comm);
    const bool converged = l_before - after.codelength_var() < config.tolerance;
    agg = detail::aggregate(agg, comm, k);
    if (converged) break;
  }
  return detail::to_partition(local.ids, node_to_super);
}

inline Partition detect(const Snapshot& snapshot, const DetectorConfig& config) {
  switch (config.algorithm) {
    case Algorithm::louvain: return louvain(snapshot, config);
    case Algorithm::girvan_newman: return girvan_newman(snapshot, config);
    case Algorithm::lpa: return lpa(snapshot, config);
    case Algorithm::infomap: return infomap_two_level(snapshot, config);
  }
  throw error(errc::invalid_argument, "unknown algorithm");
}

}  // namespace adcc
