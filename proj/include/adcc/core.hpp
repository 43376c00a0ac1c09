#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace adcc {

/// Dense sensor index, contiguous 0..N-1 within one dataset.
using NodeId = std::uint32_t;

/// Edge weights derived from BER are clamped to this minimum so they stay positive.
inline constexpr double kMinEdgeWeight = 1e-9;

enum class errc {
  malformed_row,
  ber_out_of_range,
  self_loop,
  channel_out_of_range,
  missing_channel,
  missing_labels,
  degenerate_labels,
  zero_weight_graph,
  no_pairs,
  coverage_error,
  empty_intersection,
  window_out_of_bounds,
  invalid_argument,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_row: return "malformed_row";
    case errc::ber_out_of_range: return "ber_out_of_range";
    case errc::self_loop: return "self_loop";
    case errc::channel_out_of_range: return "channel_out_of_range";
    case errc::missing_channel: return "missing_channel";
    case errc::missing_labels: return "missing_labels";
    case errc::degenerate_labels: return "degenerate_labels";
    case errc::zero_weight_graph: return "zero_weight_graph";
    case errc::no_pairs: return "no_pairs";
    case errc::coverage_error: return "coverage_error";
    case errc::empty_intersection: return "empty_intersection";
    case errc::window_out_of_bounds: return "window_out_of_bounds";
    case errc::invalid_argument: return "invalid_argument";
    case errc::io_error: return "io_error";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  error(errc code, const std::string& msg, std::size_t line)
      : std::runtime_error(std::string(errc_name(code)) + " at line " + std::to_string(line) +
                           ": " + msg),
        code_(code),
        line_(line) {}

  errc code() const { return code_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  errc code_;
  std::optional<std::size_t> line_;
};

/// Undirected edge, stored once with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double mean_ber = 0.0;
  double weight = 0.0;
};

/// Weighted undirected graph at one timestamp. Snapshots built from records
/// satisfy weight = max(1 - mean_ber, kMinEdgeWeight); reconstructed and
/// flattened graphs reuse the type with their own weight semantics.
struct Snapshot {
  std::int64_t timestamp = 0;
  std::vector<NodeId> nodes;  // sorted, unique
  std::vector<Edge> edges;    // u < v, sorted by (u, v), one per pair

  bool empty() const { return nodes.empty(); }

  bool contains(NodeId n) const {
    return std::binary_search(nodes.begin(), nodes.end(), n);
  }

  double total_weight() const {
    double w = 0.0;
    for (const Edge& e : edges) w += e.weight;
    return w;
  }

  /// Normalizes an edge list into a Snapshot: orients edges u < v, sorts them,
  /// and derives the node set from endpoints plus extra_nodes.
  static Snapshot from_edges(std::int64_t timestamp, std::vector<Edge> edges,
                             std::vector<NodeId> extra_nodes = {}) {
    Snapshot s;
    s.timestamp = timestamp;
    for (Edge& e : edges) {
      if (e.u == e.v) throw error(errc::self_loop, "snapshot edge endpoints are equal");
      if (e.u > e.v) std::swap(e.u, e.v);
      extra_nodes.push_back(e.u);
      extra_nodes.push_back(e.v);
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    std::sort(extra_nodes.begin(), extra_nodes.end());
    extra_nodes.erase(std::unique(extra_nodes.begin(), extra_nodes.end()), extra_nodes.end());
    s.nodes = std::move(extra_nodes);
    s.edges = std::move(edges);
    return s;
  }
};

/// Ordered snapshots over a window; nodes may appear and disappear.
struct TemporalSeries {
  std::vector<Snapshot> snapshots;  // strictly increasing timestamps
  std::vector<NodeId> global_nodes;  // sorted union of all snapshot node sets

  std::size_t size() const { return snapshots.size(); }
};

/// Community assignment. Labels are canonicalized to dense 0..k-1 in first
/// appearance order over increasing NodeId, so equal partitions compare equal
/// regardless of the labels they were built with.
class Partition {
 public:
  Partition() = default;

  static Partition from_labels(std::vector<std::pair<NodeId, std::uint32_t>> labels) {
    std::sort(labels.begin(), labels.end());
    for (std::size_t i = 1; i < labels.size(); ++i) {
      if (labels[i].first == labels[i - 1].first)
        throw error(errc::invalid_argument, "duplicate node in partition");
    }
    std::vector<std::uint32_t> remap;  // old label -> dense label, discovered lazily
    std::vector<std::pair<std::uint32_t, std::uint32_t>> seen;  // (old, new), small linear map
    std::uint32_t next = 0;
    for (auto& [node, label] : labels) {
      auto it = std::find_if(seen.begin(), seen.end(),
                             [&](const auto& p) { return p.first == label; });
      if (it == seen.end()) {
        seen.emplace_back(label, next);
        label = next++;
      } else {
        label = it->second;
      }
    }
    Partition p;
    p.items_ = std::move(labels);
    p.n_communities_ = next;
    return p;
  }

  static Partition singletons(const std::vector<NodeId>& nodes) {
    std::vector<std::pair<NodeId, std::uint32_t>> labels;
    labels.reserve(nodes.size());
    std::uint32_t next = 0;
    for (NodeId n : nodes) labels.emplace_back(n, next++);
    return from_labels(std::move(labels));
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t n_communities() const { return n_communities_; }

  const std::vector<std::pair<NodeId, std::uint32_t>>& items() const { return items_; }

  std::optional<std::uint32_t> try_label(NodeId n) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), n,
                               [](const auto& p, NodeId x) { return p.first < x; });
    if (it == items_.end() || it->first != n) return std::nullopt;
    return it->second;
  }

  std::uint32_t label_of(NodeId n) const {
    auto l = try_label(n);
    if (!l) throw error(errc::coverage_error, "node " + std::to_string(n) + " not in partition");
    return *l;
  }

  bool covers(const std::vector<NodeId>& nodes) const {
    for (NodeId n : nodes)
      if (!try_label(n)) return false;
    return true;
  }

  bool same_community(NodeId a, NodeId b) const { return label_of(a) == label_of(b); }

  /// Nodes grouped by label; group index == label.
  std::vector<std::vector<NodeId>> communities() const {
    std::vector<std::vector<NodeId>> out(n_communities_);
    for (const auto& [node, label] : items_) out[label].push_back(node);
    return out;
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.items_ == b.items_; }

 private:
  std::vector<std::pair<NodeId, std::uint32_t>> items_;  // sorted by node
  std::size_t n_communities_ = 0;
};

/// L channel layers over a shared sensor set. Interlayer coupling is implicit
/// between copies of the same sensor; no interlayer edges are stored.
struct MultiplexGraph {
  std::uint32_t n_layers = 0;
  std::vector<NodeId> sensors;           // sorted, unique
  std::vector<std::vector<Edge>> layers;  // layers[l]: u < v, sorted

  /// One layer viewed as a Snapshot. Every sensor has a copy on every layer,
  /// so the node set is the full sensor set.
  Snapshot layer_snapshot(std::uint32_t layer) const {
    if (layer >= n_layers) throw error(errc::invalid_argument, "layer index out of range");
    Snapshot s;
    s.timestamp = static_cast<std::int64_t>(layer);
    s.nodes = sensors;
    s.edges = layers[layer];
    return s;
  }
};

/// Connected components by edge reachability. If a partition is supplied,
/// edges whose endpoints carry different labels are ignored. Components are
/// sorted internally and by their smallest node.
inline std::vector<std::vector<NodeId>> connected_components(const Snapshot& graph,
                                                             const Partition* restrict = nullptr) {
  const std::size_t n = graph.nodes.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  auto index_of = [&](NodeId id) {
    return static_cast<std::uint32_t>(
        std::lower_bound(graph.nodes.begin(), graph.nodes.end(), id) - graph.nodes.begin());
  };
  for (const Edge& e : graph.edges) {
    if (restrict) {
      auto lu = restrict->try_label(e.u);
      auto lv = restrict->try_label(e.v);
      if (!lu || !lv || *lu != *lv) continue;
    }
    std::uint32_t a = index_of(e.u), b = index_of(e.v);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> visited(n, 0);
  std::vector<std::vector<NodeId>> components;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (visited[s]) continue;
    visited[s] = 1;
    stack.assign(1, s);
    std::vector<NodeId> comp;
    while (!stack.empty()) {
      std::uint32_t u = stack.back();
      stack.pop_back();
      comp.push_back(graph.nodes[u]);
      for (std::uint32_t v : adj[u]) {
        if (!visited[v]) {
          visited[v] = 1;
          stack.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

}  // namespace adcc
