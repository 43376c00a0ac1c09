#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcc/core.hpp"
#include "adcc/multiplex.hpp"
#include "adcc/records.hpp"
#include "adcc/temporal.hpp"

namespace adcc {

inline nlohmann::json snapshot_to_json(const Snapshot& s) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : s.edges) edges.push_back({e.u, e.v, e.mean_ber, e.weight});
  return {{"timestamp", s.timestamp}, {"edges", edges}};
}

inline nlohmann::json series_to_json(const TemporalSeries& series) {
  nlohmann::json out = nlohmann::json::array();
  for (const Snapshot& s : series.snapshots) out.push_back(snapshot_to_json(s));
  return out;
}

inline nlohmann::json partition_to_json(const Partition& p, const NodeInterner& names) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [node, label] : p.items()) out[names.name(node)] = label;
  return out;
}

inline nlohmann::json temporal_results_to_json(std::span<const TemporalResult> results,
                                               const NodeInterner& names) {
  nlohmann::json out = nlohmann::json::array();
  for (const TemporalResult& r : results)
    out.push_back({{"window_start", r.window_start},
                   {"communities", partition_to_json(r.partition, names)}});
  return out;
}

inline nlohmann::json allocation_to_json(const ChannelAllocation& alloc,
                                         const AllocationReport& report, const Partition& partition,
                                         const NodeInterner& names) {
  nlohmann::json channels = nlohmann::json::object();
  for (const auto& [sensor, ch] : alloc.sensor_channel) channels[names.name(sensor)] = ch;
  nlohmann::json isolated = nlohmann::json::array();
  for (NodeId s : alloc.isolated) isolated.push_back(names.name(s));
  return {{"channels", channels},
          {"communities", partition_to_json(partition, names)},
          {"isolated", isolated},
          {"objective",
           {{"Q", report.q_bar},
            {"penalty", report.penalty},
            {"ber", report.avg_ber},
            {"L", report.objective}}}};
}

/// Label file for the ELM option: CSV `u,v,together` with a header row.
/// Sensor names must already exist in the dataset.
inline std::vector<PairLabel> parse_labels_csv(std::istream& in, const NodeInterner& names) {
  std::vector<PairLabel> labels;
  std::string raw;
  std::size_t line_no = 0;
  if (!std::getline(in, raw)) throw error(errc::malformed_row, "missing label header", 1);
  ++line_no;
  if (detail::strip_cr(raw) != "u,v,together")
    throw error(errc::malformed_row, "expected header 'u,v,together'", 1);
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_cr(raw);
    if (line.empty()) continue;
    auto fields = detail::split_csv(line);
    if (fields.size() != 3)
      throw error(errc::malformed_row, "expected 3 fields", line_no);
    auto u = names.find(fields[0]);
    auto v = names.find(fields[1]);
    if (!u || !v)
      throw error(errc::malformed_row, "unknown sensor in label file", line_no);
    if (*u == *v) throw error(errc::self_loop, "label pair with equal endpoints", line_no);
    if (fields[2] != "0" && fields[2] != "1")
      throw error(errc::malformed_row, "together must be 0 or 1", line_no);
    labels.push_back({*u, *v, fields[2] == "1"});
  }
  return labels;
}

/// FNV-1a 64-bit content hash, for manifest reproducibility bookkeeping.
inline std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string digest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io_error, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return "fnv1a64:" + fnv1a64_hex(bytes);
}

/// Reproducibility sidecar written next to every CLI output.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::optional<std::uint64_t> seed;
  std::string input_digest;  // "-" when the command has no input file
  std::string tool_version;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json j = {{"command", m.command},
                      {"config", m.config},
                      {"input_digest", m.input_digest},
                      {"tool_version", m.tool_version}};
  j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
  return j;
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io_error, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace adcc
