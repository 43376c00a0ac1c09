#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcc/core.hpp"

namespace adcc {

/// One observed communication. Logs are directed (src -> dst) but the model is
/// undirected; both directions pool into one edge at build time.
struct TimestampedRecord {
  std::int64_t t = 0;
  NodeId src = 0;
  NodeId dst = 0;
  double ber = 0.0;
  std::optional<std::uint32_t> channel;

  friend bool operator==(const TimestampedRecord&, const TimestampedRecord&) = default;
};

/// Bijection between external sensor names and dense NodeIds.
class NodeInterner {
 public:
  NodeId intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    NodeId id = static_cast<NodeId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<NodeId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(NodeId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

  std::vector<NodeId> all_ids() const {
    std::vector<NodeId> ids(names_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i);
    return ids;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
};

struct RecordSet {
  std::vector<TimestampedRecord> records;
  NodeInterner names;
};

enum class RecordFormat { csv, jsonl };

namespace detail {

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline void validate_record(std::string_view src, std::string_view dst, double ber,
                            std::optional<std::uint32_t> channel,
                            std::optional<std::uint32_t> n_layers, std::size_t line_no) {
  if (src == dst)
    throw error(errc::self_loop, "self communication '" + std::string(src) + "'", line_no);
  if (!(ber >= 0.0 && ber <= 1.0))
    throw error(errc::ber_out_of_range, "ber = " + format_double(ber), line_no);
  if (channel && n_layers && *channel >= *n_layers)
    throw error(errc::channel_out_of_range,
                "channel " + std::to_string(*channel) + " with " + std::to_string(*n_layers) +
                    " layers",
                line_no);
}

}  // namespace detail

/// Parses the CSV record format: required header `timestamp,src,dst,ber[,channel]`,
/// then one record per row. When n_layers is given, channels are range checked
/// at parse time.
inline RecordSet parse_records_csv(std::istream& in,
                                   std::optional<std::uint32_t> n_layers = std::nullopt) {
  RecordSet out;
  std::string raw;
  std::size_t line_no = 0;

  if (!std::getline(in, raw)) throw error(errc::malformed_row, "missing header", 1);
  ++line_no;
  std::string_view header = detail::strip_cr(raw);
  bool has_channel_col = false;
  if (header == "timestamp,src,dst,ber,channel") {
    has_channel_col = true;
  } else if (header != "timestamp,src,dst,ber") {
    throw error(errc::malformed_row, "unexpected header '" + std::string(header) + "'", 1);
  }

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_cr(raw);
    if (line.empty()) continue;
    auto fields = detail::split_csv(line);
    if (fields.size() != (has_channel_col ? 5u : 4u))
      throw error(errc::malformed_row,
                  "expected " + std::to_string(has_channel_col ? 5 : 4) + " fields, got " +
                      std::to_string(fields.size()),
                  line_no);
    auto t = detail::parse_number<std::int64_t>(fields[0]);
    if (!t) throw error(errc::malformed_row, "bad timestamp '" + std::string(fields[0]) + "'", line_no);
    if (fields[1].empty() || fields[2].empty())
      throw error(errc::malformed_row, "empty sensor name", line_no);
    auto ber = detail::parse_number<double>(fields[3]);
    if (!ber) throw error(errc::malformed_row, "bad ber '" + std::string(fields[3]) + "'", line_no);
    std::optional<std::uint32_t> channel;
    if (has_channel_col && !fields[4].empty()) {
      channel = detail::parse_number<std::uint32_t>(fields[4]);
      if (!channel)
        throw error(errc::malformed_row, "bad channel '" + std::string(fields[4]) + "'", line_no);
    }
    detail::validate_record(fields[1], fields[2], *ber, channel, n_layers, line_no);
    TimestampedRecord rec;
    rec.t = *t;
    rec.src = out.names.intern(fields[1]);
    rec.dst = out.names.intern(fields[2]);
    rec.ber = *ber;
    rec.channel = channel;
    out.records.push_back(rec);
  }
  return out;
}

/// Parses the JSONL record format: one object per line with keys t, src, dst,
/// ber and optional ch.
inline RecordSet parse_records_jsonl(std::istream& in,
                                     std::optional<std::uint32_t> n_layers = std::nullopt) {
  RecordSet out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_cr(raw);
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw error(errc::malformed_row, "invalid json object", line_no);
    if (!j.contains("t") || !j["t"].is_number_integer() || !j.contains("src") ||
        !j["src"].is_string() || !j.contains("dst") || !j["dst"].is_string() ||
        !j.contains("ber") || !j["ber"].is_number())
      throw error(errc::malformed_row, "missing or mistyped record keys", line_no);
    std::optional<std::uint32_t> channel;
    if (j.contains("ch")) {
      if (!j["ch"].is_number_unsigned())
        throw error(errc::malformed_row, "bad channel", line_no);
      channel = j["ch"].get<std::uint32_t>();
    }
    const std::string src = j["src"].get<std::string>();
    const std::string dst = j["dst"].get<std::string>();
    const double ber = j["ber"].get<double>();
    detail::validate_record(src, dst, ber, channel, n_layers, line_no);
    TimestampedRecord rec;
    rec.t = j["t"].get<std::int64_t>();
    rec.src = out.names.intern(src);
    rec.dst = out.names.intern(dst);
    rec.ber = ber;
    rec.channel = channel;
    out.records.push_back(rec);
  }
  return out;
}

inline RecordSet parse_records(std::istream& in, RecordFormat format,
                               std::optional<std::uint32_t> n_layers = std::nullopt) {
  return format == RecordFormat::csv ? parse_records_csv(in, n_layers)
                                     : parse_records_jsonl(in, n_layers);
}

/// Serializes records in the CSV format. Feeding the output back through
/// parse_records_csv reproduces it byte for byte.
inline void write_records_csv(std::ostream& out, const RecordSet& rs) {
  bool any_channel = false;
  for (const auto& r : rs.records) any_channel |= r.channel.has_value();
  out << (any_channel ? "timestamp,src,dst,ber,channel\n" : "timestamp,src,dst,ber\n");
  for (const auto& r : rs.records) {
    out << r.t << ',' << rs.names.name(r.src) << ',' << rs.names.name(r.dst) << ','
        << detail::format_double(r.ber);
    if (any_channel) {
      out << ',';
      if (r.channel) out << *r.channel;
    }
    out << '\n';
  }
}

/// Builds the weighted undirected graph of one timestamp: one edge per sensor
/// pair with the arithmetic mean of that pair's ber values as mean_ber and
/// weight = max(1 - mean_ber, kMinEdgeWeight).
inline Snapshot build_snapshot(std::span<const TimestampedRecord> records, std::int64_t timestamp) {
  std::map<std::pair<NodeId, NodeId>, std::pair<double, std::size_t>> acc;
  for (const auto& r : records) {
    if (r.t != timestamp)
      throw error(errc::invalid_argument, "record timestamp mismatch in build_snapshot");
    auto key = std::minmax(r.src, r.dst);
    auto& [sum, count] = acc[{key.first, key.second}];
    sum += r.ber;
    ++count;
  }
  std::vector<Edge> edges;
  edges.reserve(acc.size());
  for (const auto& [pair, sc] : acc) {
    Edge e;
    e.u = pair.first;
    e.v = pair.second;
    e.mean_ber = sc.first / static_cast<double>(sc.second);
    e.weight = std::max(1.0 - e.mean_ber, kMinEdgeWeight);
    edges.push_back(e);
  }
  return Snapshot::from_edges(timestamp, std::move(edges));
}

/// Splits records by timestamp into an ordered series of snapshots.
inline TemporalSeries build_series(std::span<const TimestampedRecord> records) {
  std::map<std::int64_t, std::vector<TimestampedRecord>> by_tick;
  for (const auto& r : records) by_tick[r.t].push_back(r);
  TemporalSeries series;
  series.snapshots.reserve(by_tick.size());
  for (const auto& [t, recs] : by_tick) {
    Snapshot s = build_snapshot(recs, t);
    series.global_nodes.insert(series.global_nodes.end(), s.nodes.begin(), s.nodes.end());
    series.snapshots.push_back(std::move(s));
  }
  std::sort(series.global_nodes.begin(), series.global_nodes.end());
  series.global_nodes.erase(std::unique(series.global_nodes.begin(), series.global_nodes.end()),
                            series.global_nodes.end());
  return series;
}

/// Aggregates records per channel layer; within a layer, per-pair ber values
/// are averaged across all timestamps.
inline MultiplexGraph build_multiplex(std::span<const TimestampedRecord> records,
                                      std::uint32_t n_layers) {
  if (n_layers < 1) throw error(errc::invalid_argument, "n_layers must be >= 1");
  MultiplexGraph mg;
  mg.n_layers = n_layers;
  std::vector<std::map<std::pair<NodeId, NodeId>, std::pair<double, std::size_t>>> acc(n_layers);
  for (const auto& r : records) {
    if (!r.channel) throw error(errc::missing_channel, "record without channel in multiplex build");
    if (*r.channel >= n_layers)
      throw error(errc::channel_out_of_range, "channel " + std::to_string(*r.channel));
    auto key = std::minmax(r.src, r.dst);
    auto& [sum, count] = acc[*r.channel][{key.first, key.second}];
    sum += r.ber;
    ++count;
    mg.sensors.push_back(r.src);
    mg.sensors.push_back(r.dst);
  }
  std::sort(mg.sensors.begin(), mg.sensors.end());
  mg.sensors.erase(std::unique(mg.sensors.begin(), mg.sensors.end()), mg.sensors.end());
  mg.layers.resize(n_layers);
  for (std::uint32_t l = 0; l < n_layers; ++l) {
    for (const auto& [pair, sc] : acc[l]) {
      Edge e;
      e.u = pair.first;
      e.v = pair.second;
      e.mean_ber = sc.first / static_cast<double>(sc.second);
      e.weight = std::max(1.0 - e.mean_ber, kMinEdgeWeight);
      mg.layers[l].push_back(e);
    }
  }
  return mg;
}

}  // namespace adcc
