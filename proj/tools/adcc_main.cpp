// adcc: community-based clustering of ad-hoc sensor networks from
// communication logs. Subcommands cover the temporal pipeline, the multiplex
// pipeline, conventional baselines, synthetic dataset generation, and the
// window-size sweep. All outputs are deterministic for fixed flags and seed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adcc/baselines.hpp"
#include "adcc/core.hpp"
#include "adcc/detect.hpp"
#include "adcc/io.hpp"
#include "adcc/metrics.hpp"
#include "adcc/multiplex.hpp"
#include "adcc/records.hpp"
#include "adcc/synth.hpp"
#include "adcc/temporal.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;
using nlohmann::json;

enum class LogLevel { quiet, normal, debug };

LogLevel log_level() {
  const char* env = std::getenv("ADCC_LOG");
  if (!env) return LogLevel::normal;
  const std::string v(env);
  if (v == "quiet") return LogLevel::quiet;
  if (v == "debug") return LogLevel::debug;
  return LogLevel::normal;
}

void warn(const std::string& msg) {
  if (log_level() != LogLevel::quiet) std::cerr << "adcc: warning: " << msg << "\n";
}

void debug(const std::string& msg) {
  if (log_level() == LogLevel::debug) std::cerr << "adcc: " << msg << "\n";
}

int exit_code_for(const adcc::error& e) {
  switch (e.code()) {
    case adcc::errc::malformed_row:
    case adcc::errc::ber_out_of_range:
    case adcc::errc::self_loop:
    case adcc::errc::channel_out_of_range:
    case adcc::errc::missing_channel:
    case adcc::errc::io_error:
      return 3;
    default:
      return 4;
  }
}

adcc::RecordFormat format_for(const std::string& flag, const fs::path& input) {
  if (flag == "csv") return adcc::RecordFormat::csv;
  if (flag == "jsonl") return adcc::RecordFormat::jsonl;
  return input.extension() == ".jsonl" ? adcc::RecordFormat::jsonl : adcc::RecordFormat::csv;
}

adcc::RecordSet load_records(const fs::path& input, const std::string& format_flag,
                             std::optional<std::uint32_t> n_layers = std::nullopt) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw adcc::error(adcc::errc::io_error, "cannot open " + input.string());
  return adcc::parse_records(in, format_for(format_flag, input), n_layers);
}

json json_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

/// Metric report shared by the temporal pipeline (one row per window) and the
/// baselines (one row per timestamp). Each row evaluates one partition over
/// its graphs; undefined metrics become nulls and are skipped in the means.
json metric_report(const std::vector<std::span<const adcc::Snapshot>>& graphs,
                   const std::vector<const adcc::Partition*>& partitions,
                   const std::vector<std::pair<const char*, std::int64_t>>& row_keys,
                   const adcc::ObjectiveWeights& weights) {
  json rows = json::array();
  double q_sum = 0, ber_sum = 0, obj_sum = 0, var_sum = 0, var_count_sum = 0;
  std::size_t q_n = 0, ber_n = 0, obj_n = 0, var_n = 0;
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    json row;
    row[row_keys[i].first] = row_keys[i].second;
    std::optional<double> q, ber, obj;
    try {
      q = adcc::average_modularity(graphs[i], *partitions[i]).value;
    } catch (const adcc::error&) {
    }
    try {
      ber = adcc::average_ber(graphs[i], *partitions[i]).value;
    } catch (const adcc::error&) {
    }
    try {
      obj = adcc::objective(graphs[i], *partitions[i], weights);
    } catch (const adcc::error&) {
    }
    row["Q"] = json_or_null(q);
    row["avg_ber"] = json_or_null(ber);
    row["objective"] = json_or_null(obj);
    if (i == 0) {
      row["variation_count"] = nullptr;
      row["variation_normalized"] = nullptr;
    } else {
      const adcc::Variation v = adcc::variation(*partitions[i - 1], *partitions[i]);
      row["variation_count"] = v.count;
      row["variation_normalized"] = v.normalized;
      var_sum += v.normalized;
      var_count_sum += static_cast<double>(v.count);
      ++var_n;
    }
    if (q) q_sum += *q, ++q_n;
    if (ber) ber_sum += *ber, ++ber_n;
    if (obj) obj_sum += *obj, ++obj_n;
    rows.push_back(std::move(row));
  }
  json report;
  report["Q_bar"] = q_n ? json(q_sum / q_n) : json(nullptr);
  report["variation_mean"] = var_n ? json(var_sum / var_n) : json(nullptr);
  report["variation_count_mean"] = var_n ? json(var_count_sum / var_n) : json(nullptr);
  report["avg_ber"] = ber_n ? json(ber_sum / ber_n) : json(nullptr);
  report["objective"] = obj_n ? json(obj_sum / obj_n) : json(nullptr);
  report["per_timestamp"] = std::move(rows);
  return report;
}

void write_manifest(const fs::path& out_dir, const std::string& command, json config,
                    std::optional<std::uint64_t> seed, const std::string& input_digest,
                    json extra = nullptr) {
  adcc::RunManifest m;
  m.command = command;
  m.config = std::move(config);
  m.seed = seed;
  m.input_digest = input_digest;
  m.tool_version = kVersion;
  json j = adcc::manifest_to_json(m);
  if (!extra.is_null()) j["stats"] = std::move(extra);
  adcc::write_json_file(out_dir / "manifest.json", j);
}

struct CommonFlags {
  std::string input;
  std::string format = "auto";
  std::string out;
};

void add_io_flags(CLI::App* cmd, CommonFlags& flags, bool needs_input = true) {
  if (needs_input)
    cmd->add_option("--input", flags.input, "input record file")
        ->required()
        ->check(CLI::ExistingFile);
  cmd->add_option("--format", flags.format, "input format (default: by extension)")
      ->check(CLI::IsMember({"auto", "csv", "jsonl"}));
  cmd->add_option("--out", flags.out, "output directory")->required();
}

const std::map<std::string, adcc::Algorithm> kDetectors = {
    {"louvain", adcc::Algorithm::louvain},
    {"gn", adcc::Algorithm::girvan_newman},
    {"lpa", adcc::Algorithm::lpa},
    {"infomap", adcc::Algorithm::infomap}};

int cmd_cluster_temporal(const CommonFlags& io, const adcc::DetectorConfig& config,
                         std::size_t window, const std::string& reconstruction,
                         const std::string& labels_path, const adcc::ElmConfig& elm,
                         const adcc::ObjectiveWeights& weights, const std::string& export_series,
                         const json& config_json) {
  const adcc::RecordSet rs = load_records(io.input, io.format);
  const adcc::TemporalSeries series = adcc::build_series(rs.records);
  std::vector<adcc::PairLabel> labels;
  if (!labels_path.empty()) {
    std::ifstream in(labels_path, std::ios::binary);
    if (!in) throw adcc::error(adcc::errc::io_error, "cannot open " + labels_path);
    labels = adcc::parse_labels_csv(in, rs.names);
  }
  const auto kind = reconstruction == "elm" ? adcc::Reconstruction::elm
                                            : adcc::Reconstruction::jaccard;
  const auto results = adcc::run_temporal(series, config, window, kind, labels, &elm);

  const fs::path out_dir(io.out);
  fs::create_directories(out_dir);
  if (!export_series.empty())
    adcc::write_json_file(export_series, adcc::series_to_json(series));
  adcc::write_json_file(out_dir / "partitions.json",
                        adcc::temporal_results_to_json(results, rs.names));

  std::vector<std::span<const adcc::Snapshot>> graphs;
  std::vector<const adcc::Partition*> partitions;
  std::vector<std::pair<const char*, std::int64_t>> keys;
  for (const adcc::TemporalResult& r : results) {
    graphs.push_back(std::span(series.snapshots).subspan(r.window_start, window));
    partitions.push_back(&r.partition);
    keys.emplace_back("window_start", static_cast<std::int64_t>(r.window_start));
  }
  adcc::write_json_file(out_dir / "metrics.json",
                        metric_report(graphs, partitions, keys, weights));
  write_manifest(out_dir, "cluster-temporal", config_json, config.seed,
                 adcc::digest_file(io.input));
  return 0;
}

int cmd_cluster_multiplex(const CommonFlags& io, std::uint32_t layers,
                          const adcc::MultiplexDetectorConfig& config,
                          const adcc::ObjectiveWeights& weights, const json& config_json) {
  const adcc::RecordSet rs = load_records(io.input, io.format, layers);
  const adcc::MultiplexGraph mg = adcc::build_multiplex(rs.records, layers);
  const adcc::Partition partition = adcc::detect_multiplex(mg, config);
  const adcc::ChannelAllocation alloc = adcc::greedy_channel_allocation(mg, partition);
  const adcc::AllocationReport report = adcc::allocation_report(mg, partition, alloc, weights);

  const fs::path out_dir(io.out);
  fs::create_directories(out_dir);
  adcc::write_json_file(out_dir / "partition.json",
                        json{{"communities", adcc::partition_to_json(partition, rs.names)}});
  adcc::write_json_file(out_dir / "allocation.json",
                        adcc::allocation_to_json(alloc, report, partition, rs.names));
  json sizes = json::array();
  for (std::size_t s : report.community_sizes) sizes.push_back(s);
  adcc::write_json_file(out_dir / "report.json",
                        json{{"objective",
                              {{"Q", report.q_bar},
                               {"penalty", report.penalty},
                               {"ber", report.avg_ber},
                               {"L", report.objective}}},
                             {"q_bar_defined", report.q_bar_defined},
                             {"n_cc", report.n_cc},
                             {"n_communities", report.n_communities},
                             {"community_sizes", sizes},
                             {"isolated_count", report.isolated_count}});
  write_manifest(out_dir, "cluster-multiplex", config_json, config.seed,
                 adcc::digest_file(io.input));
  return 0;
}

int cmd_baseline(const CommonFlags& io, const std::string& algorithm, int k,
                 const adcc::WcaWeights& wca_weights, const adcc::ObjectiveWeights& weights,
                 const json& config_json) {
  const adcc::RecordSet rs = load_records(io.input, io.format);
  const adcc::TemporalSeries series = adcc::build_series(rs.records);

  std::vector<adcc::Partition> partitions;
  partitions.reserve(series.size());
  for (const adcc::Snapshot& snapshot : series.snapshots) {
    if (algorithm == "wca") {
      partitions.push_back(adcc::wca(snapshot, wca_weights));
    } else if (algorithm == "wcds") {
      partitions.push_back(adcc::wcds(snapshot));
    } else {
      partitions.push_back(adcc::k_conid(snapshot, k));
    }
  }

  const fs::path out_dir(io.out);
  fs::create_directories(out_dir);
  json parts = json::array();
  for (std::size_t i = 0; i < partitions.size(); ++i)
    parts.push_back({{"timestamp", series.snapshots[i].timestamp},
                     {"communities", adcc::partition_to_json(partitions[i], rs.names)}});
  adcc::write_json_file(out_dir / "partitions.json", parts);

  std::vector<std::span<const adcc::Snapshot>> graphs;
  std::vector<const adcc::Partition*> part_ptrs;
  std::vector<std::pair<const char*, std::int64_t>> keys;
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    graphs.push_back(std::span(series.snapshots).subspan(i, 1));
    part_ptrs.push_back(&partitions[i]);
    keys.emplace_back("timestamp", series.snapshots[i].timestamp);
  }
  adcc::write_json_file(out_dir / "metrics.json",
                        metric_report(graphs, part_ptrs, keys, weights));
  write_manifest(out_dir, "baseline", config_json, std::nullopt, adcc::digest_file(io.input));
  return 0;
}

int cmd_generate(const CommonFlags& io, const adcc::TemporalSynthConfig& config,
                 std::uint32_t layers, double off_affinity, const json& config_json) {
  const fs::path out_dir(io.out);
  fs::create_directories(out_dir);

  adcc::RecordSet records;
  json ground_truth;
  if (layers == 0) {
    adcc::TemporalDataset data = adcc::generate_temporal(config);
    records = std::move(data.records);
    ground_truth = json::array();
    for (std::size_t t = 0; t < data.ground_truth.size(); ++t)
      ground_truth.push_back(
          {{"timestamp", static_cast<std::int64_t>(t)},
           {"communities", adcc::partition_to_json(data.ground_truth[t], records.names)}});
  } else {
    std::vector<std::vector<double>> affinity(
        config.n_communities, std::vector<double>(layers, off_affinity));
    for (int c = 0; c < config.n_communities; ++c) affinity[c][c % layers] = 1.0;
    adcc::MultiplexDataset data = adcc::generate_multiplex(config, layers, affinity);
    records = std::move(data.records);
    ground_truth = {{"communities", adcc::partition_to_json(data.ground_truth, records.names)}};
  }

  std::ofstream csv(out_dir / "records.csv", std::ios::binary);
  if (!csv) throw adcc::error(adcc::errc::io_error, "cannot write records.csv");
  adcc::write_records_csv(csv, records);
  csv.close();
  adcc::write_json_file(out_dir / "ground_truth.json", ground_truth);

  // Table-1 style counts: records, distinct sensor pairs, distinct (pair, t).
  std::set<std::pair<adcc::NodeId, adcc::NodeId>> pairs;
  std::set<std::tuple<adcc::NodeId, adcc::NodeId, std::int64_t>> pair_ticks;
  for (const auto& r : records.records) {
    const auto [lo, hi] = std::minmax(r.src, r.dst);
    pairs.insert({lo, hi});
    pair_ticks.insert({lo, hi, r.t});
  }
  write_manifest(out_dir, "generate", config_json, config.seed, "-",
                 json{{"n_records", records.records.size()},
                      {"n_distinct_pairs", pairs.size()},
                      {"n_pair_timestamps", pair_ticks.size()}});
  return 0;
}

int cmd_sweep_window(const CommonFlags& io, const adcc::DetectorConfig& config,
                     std::size_t win_lo, std::size_t win_hi, const json& config_json) {
  const adcc::RecordSet rs = load_records(io.input, io.format);
  const adcc::TemporalSeries series = adcc::build_series(rs.records);
  const std::vector<adcc::Partition> per_tick = adcc::per_timestamp_partitions(series, config);

  const fs::path out_dir(io.out);
  fs::create_directories(out_dir);
  std::ofstream csv(out_dir / "sweep.csv", std::ios::binary);
  if (!csv) throw adcc::error(adcc::errc::io_error, "cannot write sweep.csv");
  csv << "window_len,q_bar,mean_variation\n";
  for (std::size_t len = win_lo; len <= win_hi; ++len) {
    if (len > series.size())
      throw adcc::error(adcc::errc::window_out_of_bounds,
                        "window " + std::to_string(len) + " exceeds series length");
    double q_sum = 0, var_sum = 0;
    std::size_t q_n = 0, var_n = 0;
    adcc::Partition prev;
    for (std::size_t start = 0; start + len <= series.size(); ++start) {
      const adcc::Snapshot rec =
          adcc::jaccard_cooccurrence(per_tick, series, {start, len});
      adcc::Partition part = adcc::node_partition(rec, config);
      try {
        q_sum += adcc::average_modularity(std::span(series.snapshots).subspan(start, len), part)
                     .value;
        ++q_n;
      } catch (const adcc::error&) {
      }
      if (start > 0) {
        var_sum += adcc::variation(prev, part).normalized;
        ++var_n;
      }
      prev = std::move(part);
    }
    csv << len << ',' << adcc::detail::format_double(q_n ? q_sum / q_n : 0.0) << ','
        << adcc::detail::format_double(var_n ? var_sum / var_n : 0.0) << '\n';
  }
  csv.close();
  write_manifest(out_dir, "sweep-window", config_json, config.seed,
                 adcc::digest_file(io.input));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adcc: community-detection clustering for ad-hoc sensor networks"};
  app.require_subcommand(1);

  // ---- cluster-temporal ----
  CommonFlags ct_io;
  adcc::DetectorConfig ct_config;
  adcc::ElmConfig ct_elm;
  adcc::ObjectiveWeights ct_weights;
  std::string ct_algorithm = "louvain", ct_reconstruction = "jaccard", ct_labels,
              ct_export_series;
  std::size_t ct_window = 0;
  auto* ct = app.add_subcommand("cluster-temporal",
                                "sliding-window clustering from per-timestamp communities");
  add_io_flags(ct, ct_io);
  ct->add_option("--algorithm", ct_algorithm, "per-timestamp detector")
      ->check(CLI::IsMember({"louvain", "gn", "lpa", "infomap"}));
  ct->add_option("--window", ct_window, "window length in timestamps")->required();
  ct->add_option("--reconstruction", ct_reconstruction, "co-membership graph rule")
      ->check(CLI::IsMember({"jaccard", "elm"}));
  ct->add_option("--labels", ct_labels, "pair label CSV (elm reconstruction)")
      ->check(CLI::ExistingFile);
  ct->add_option("--seed", ct_config.seed, "detector seed")->required();
  ct->add_option("--max-iterations", ct_config.max_iterations)->check(CLI::PositiveNumber);
  ct->add_option("--tolerance", ct_config.tolerance)->check(CLI::PositiveNumber);
  ct->add_option("--lambda", ct_weights.lambda, "connectivity penalty weight")
      ->check(CLI::NonNegativeNumber);
  ct->add_option("--gamma", ct_weights.gamma, "BER weight");
  ct->add_option("--elm-hidden", ct_elm.n_hidden)->check(CLI::PositiveNumber);
  ct->add_option("--elm-threshold", ct_elm.edge_threshold, "edge emission cutoff");
  ct->add_option("--export-series", ct_export_series, "dump the parsed series JSON here");

  // ---- cluster-multiplex ----
  CommonFlags cm_io;
  adcc::MultiplexDetectorConfig cm_config;
  adcc::ObjectiveWeights cm_weights{1.0, 1.0};
  std::string cm_algorithm = "mnlpa";
  std::uint32_t cm_layers = 0;
  auto* cm = app.add_subcommand("cluster-multiplex",
                                "multiplex community detection and channel allocation");
  add_io_flags(cm, cm_io);
  cm->add_option("--layers", cm_layers, "number of channels")
      ->required()
      ->check(CLI::PositiveNumber);
  cm->add_option("--algorithm", cm_algorithm, "multiplex detector")
      ->check(CLI::IsMember({"mnlpa", "flatten"}));
  cm->add_option("--seed", cm_config.seed, "detector seed")->required();
  cm->add_option("--max-iterations", cm_config.max_iterations)->check(CLI::PositiveNumber);
  cm->add_option("--lambda", cm_weights.lambda, "connectivity penalty weight")
      ->check(CLI::NonNegativeNumber);
  cm->add_option("--gamma", cm_weights.gamma, "BER weight");

  // ---- baseline ----
  CommonFlags bl_io;
  adcc::WcaWeights bl_wca;
  adcc::ObjectiveWeights bl_weights;
  std::string bl_algorithm;
  int bl_k = 0;
  auto* bl = app.add_subcommand("baseline", "conventional per-timestamp clustering");
  add_io_flags(bl, bl_io);
  bl->add_option("--algorithm", bl_algorithm, "baseline algorithm")
      ->required()
      ->check(CLI::IsMember({"wca", "wcds", "kconid"}));
  bl->add_option("--k", bl_k, "k-CONID hop radius")->check(CLI::PositiveNumber);
  bl->add_option("--wca-w-degree", bl_wca.w_degree)->check(CLI::NonNegativeNumber);
  bl->add_option("--wca-w-distance", bl_wca.w_distance)->check(CLI::NonNegativeNumber);
  bl->add_option("--wca-ideal-degree", bl_wca.ideal_degree)->check(CLI::PositiveNumber);
  bl->add_option("--lambda", bl_weights.lambda)->check(CLI::NonNegativeNumber);
  bl->add_option("--gamma", bl_weights.gamma);

  // ---- generate ----
  CommonFlags gen_io;
  adcc::TemporalSynthConfig gen_config;
  std::uint32_t gen_layers = 0;
  double gen_off_affinity = 0.15;
  auto* gen = app.add_subcommand("generate", "synthetic planted-partition dataset");
  add_io_flags(gen, gen_io, /*needs_input=*/false);
  gen->add_option("--nodes", gen_config.n_nodes)->required()->check(CLI::PositiveNumber);
  gen->add_option("--communities", gen_config.n_communities)->check(CLI::PositiveNumber);
  gen->add_option("--timestamps", gen_config.n_timestamps)
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--p-in", gen_config.p_in);
  gen->add_option("--p-out", gen_config.p_out);
  gen->add_option("--ber-in-mean", gen_config.ber_in.mean);
  gen->add_option("--ber-in-std", gen_config.ber_in.stddev);
  gen->add_option("--ber-out-mean", gen_config.ber_out.mean);
  gen->add_option("--ber-out-std", gen_config.ber_out.stddev);
  gen->add_option("--churn", gen_config.churn);
  gen->add_option("--presence", gen_config.presence);
  gen->add_option("--layers", gen_layers, "emit channels for a multiplex dataset (0 = none)");
  gen->add_option("--off-affinity", gen_off_affinity,
                  "affinity of a community to non-preferred layers");
  gen->add_option("--seed", gen_config.seed)->required();

  // ---- sweep-window ----
  CommonFlags sw_io;
  adcc::DetectorConfig sw_config;
  std::string sw_algorithm = "louvain", sw_windows;
  auto* sw = app.add_subcommand("sweep-window", "Q-bar and variation versus window length");
  add_io_flags(sw, sw_io);
  sw->add_option("--algorithm", sw_algorithm, "per-timestamp detector")
      ->check(CLI::IsMember({"louvain", "gn", "lpa", "infomap"}));
  sw->add_option("--windows", sw_windows, "window range A..B")->required();
  sw->add_option("--seed", sw_config.seed)->required();
  sw->add_option("--max-iterations", sw_config.max_iterations)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "adcc: " << e.what() << "\n";
    return 2;
  }

  try {
    if (ct->parsed()) {
      if (ct_window < 1) {
        std::cerr << "adcc: --window must be >= 1\n";
        return 2;
      }
      if (ct_reconstruction == "elm" && ct_labels.empty()) {
        std::cerr << "adcc: labels required for elm reconstruction\n";
        return 2;
      }
      ct_config.algorithm = kDetectors.at(ct_algorithm);
      ct_elm.seed = ct_config.seed;
      json cfg{{"input", ct_io.input},           {"algorithm", ct_algorithm},
               {"window", ct_window},            {"reconstruction", ct_reconstruction},
               {"labels", ct_labels},            {"seed", ct_config.seed},
               {"max_iterations", ct_config.max_iterations},
               {"tolerance", ct_config.tolerance},
               {"lambda", ct_weights.lambda},    {"gamma", ct_weights.gamma},
               {"elm_hidden", ct_elm.n_hidden},  {"elm_threshold", ct_elm.edge_threshold}};
      debug("cluster-temporal config: " + cfg.dump());
      return cmd_cluster_temporal(ct_io, ct_config, ct_window, ct_reconstruction, ct_labels,
                                  ct_elm, ct_weights, ct_export_series, cfg);
    }
    if (cm->parsed()) {
      cm_config.algorithm = cm_algorithm == "mnlpa" ? adcc::MultiplexAlgorithm::mnlpa
                                                    : adcc::MultiplexAlgorithm::flatten_louvain;
      json cfg{{"input", cm_io.input},   {"layers", cm_layers},
               {"algorithm", cm_algorithm}, {"seed", cm_config.seed},
               {"max_iterations", cm_config.max_iterations},
               {"lambda", cm_weights.lambda}, {"gamma", cm_weights.gamma}};
      debug("cluster-multiplex config: " + cfg.dump());
      return cmd_cluster_multiplex(cm_io, cm_layers, cm_config, cm_weights, cfg);
    }
    if (bl->parsed()) {
      if (bl_algorithm == "kconid" && bl_k == 0) {
        bl_k = 2;
        warn("kconid without --k, defaulting to k=2");
      }
      json cfg{{"input", bl_io.input},
               {"algorithm", bl_algorithm},
               {"k", bl_k},
               {"wca_w_degree", bl_wca.w_degree},
               {"wca_w_distance", bl_wca.w_distance},
               {"wca_ideal_degree", bl_wca.ideal_degree},
               {"lambda", bl_weights.lambda},
               {"gamma", bl_weights.gamma}};
      debug("baseline config: " + cfg.dump());
      return cmd_baseline(bl_io, bl_algorithm, bl_k, bl_wca, bl_weights, cfg);
    }
    if (gen->parsed()) {
      if (!(gen_config.p_out >= 0.0 && gen_config.p_out < gen_config.p_in &&
            gen_config.p_in <= 1.0)) {
        std::cerr << "adcc: need 0 <= p-out < p-in <= 1\n";
        return 2;
      }
      json cfg{{"nodes", gen_config.n_nodes},
               {"communities", gen_config.n_communities},
               {"timestamps", gen_config.n_timestamps},
               {"p_in", gen_config.p_in},
               {"p_out", gen_config.p_out},
               {"ber_in", {gen_config.ber_in.mean, gen_config.ber_in.stddev}},
               {"ber_out", {gen_config.ber_out.mean, gen_config.ber_out.stddev}},
               {"churn", gen_config.churn},
               {"presence", gen_config.presence},
               {"layers", gen_layers},
               {"off_affinity", gen_off_affinity},
               {"seed", gen_config.seed}};
      debug("generate config: " + cfg.dump());
      try {
        return cmd_generate(gen_io, gen_config, gen_layers, gen_off_affinity, cfg);
      } catch (const adcc::error& e) {
        if (e.code() == adcc::errc::invalid_argument) {
          std::cerr << "adcc: " << e.what() << "\n";
          return 2;
        }
        throw;
      }
    }
    if (sw->parsed()) {
      const auto sep = sw_windows.find("..");
      std::size_t lo = 0, hi = 0;
      bool ok = sep != std::string::npos;
      if (ok) {
        auto lo_v = adcc::detail::parse_number<std::size_t>(sw_windows.substr(0, sep));
        auto hi_v = adcc::detail::parse_number<std::size_t>(sw_windows.substr(sep + 2));
        ok = lo_v && hi_v;
        if (ok) lo = *lo_v, hi = *hi_v;
      }
      if (!ok || lo < 1 || lo > hi) {
        std::cerr << "adcc: --windows must be A..B with 1 <= A <= B\n";
        return 2;
      }
      sw_config.algorithm = kDetectors.at(sw_algorithm);
      json cfg{{"input", sw_io.input},
               {"algorithm", sw_algorithm},
               {"windows", sw_windows},
               {"seed", sw_config.seed},
               {"max_iterations", sw_config.max_iterations}};
      debug("sweep-window config: " + cfg.dump());
      return cmd_sweep_window(sw_io, sw_config, lo, hi, cfg);
    }
  } catch (const adcc::error& e) {
    std::cerr << "adcc: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "adcc: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
