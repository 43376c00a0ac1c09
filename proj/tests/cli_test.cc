#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ADCC_BIN_PATH) + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(testing::TempDir()) / ("adcc_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

fs::path generate_dataset(const std::string& name, const std::string& extra = "") {
  const fs::path dir = fresh_dir(name);
  const int code = run_cli("generate --nodes 18 --communities 3 --timestamps 6 --p-in 0.7 "
                           "--p-out 0.05 --seed 5 --out " + dir.string() + " " + extra);
  EXPECT_EQ(code, 0);
  return dir;
}

TEST(CliGenerate, WritesDatasetAndManifest) {
  const fs::path dir = generate_dataset("gen");
  EXPECT_TRUE(fs::exists(dir / "records.csv"));
  EXPECT_TRUE(fs::exists(dir / "ground_truth.json"));
  const json manifest = load_json(dir / "manifest.json");
  EXPECT_EQ(manifest["command"], "generate");
  EXPECT_EQ(manifest["seed"], 5);
  EXPECT_EQ(manifest["input_digest"], "-");
  EXPECT_TRUE(manifest.contains("tool_version"));
  EXPECT_GT(manifest["stats"]["n_records"].get<std::size_t>(), 0u);
}

TEST(CliGenerate, InvalidProbabilityOrderIsFlagError) {
  const fs::path dir = fresh_dir("gen_bad");
  EXPECT_EQ(run_cli("generate --nodes 10 --timestamps 3 --p-out 0.5 --p-in 0.3 --seed 1 --out " +
                    dir.string()),
            2);
}

TEST(CliClusterTemporal, WritesPartitionsMetricsManifest) {
  const fs::path data = generate_dataset("ct_data");
  const fs::path out = fresh_dir("ct_out");
  const int code =
      run_cli("cluster-temporal --input " + (data / "records.csv").string() +
              " --algorithm louvain --window 2 --seed 3 --out " + out.string());
  EXPECT_EQ(code, 0);
  const json parts = load_json(out / "partitions.json");
  EXPECT_EQ(parts.size(), 5u);  // 6 ticks, window 2
  EXPECT_TRUE(parts[0].contains("window_start"));
  EXPECT_TRUE(parts[0].contains("communities"));
  const json metrics = load_json(out / "metrics.json");
  for (const char* key : {"Q_bar", "variation_mean", "avg_ber", "objective", "per_timestamp"})
    EXPECT_TRUE(metrics.contains(key)) << key;
  EXPECT_EQ(load_json(out / "manifest.json")["command"], "cluster-temporal");
}

TEST(CliClusterTemporal, ElmWithoutLabelsIsFlagError) {
  const fs::path data = generate_dataset("ct_elm_bad");
  const fs::path out = fresh_dir("ct_elm_bad_out");
  EXPECT_EQ(run_cli("cluster-temporal --input " + (data / "records.csv").string() +
                    " --reconstruction elm --window 2 --seed 3 --out " + out.string()),
            2);
}

TEST(CliClusterTemporal, WindowZeroIsFlagError) {
  const fs::path data = generate_dataset("ct_w0");
  const fs::path out = fresh_dir("ct_w0_out");
  EXPECT_EQ(run_cli("cluster-temporal --input " + (data / "records.csv").string() +
                    " --window 0 --seed 3 --out " + out.string()),
            2);
}

TEST(CliClusterTemporal, ElmWithLabelsRuns) {
  const fs::path data = generate_dataset("ct_elm");
  // Labels from the generated ground truth at tick 0.
  const json gt = load_json(data / "ground_truth.json");
  const json communities = gt[0]["communities"];
  std::vector<std::pair<std::string, int>> nodes;
  for (auto it = communities.begin(); it != communities.end(); ++it)
    nodes.emplace_back(it.key(), it.value().get<int>());
  std::ofstream labels(data / "labels.csv");
  labels << "u,v,together\n";
  for (std::size_t i = 0; i + 1 < nodes.size() && i < 40; ++i)
    labels << nodes[i].first << ',' << nodes[i + 1].first << ','
           << (nodes[i].second == nodes[i + 1].second ? 1 : 0) << '\n';
  labels.close();

  const fs::path out = fresh_dir("ct_elm_out");
  EXPECT_EQ(run_cli("cluster-temporal --input " + (data / "records.csv").string() +
                    " --reconstruction elm --labels " + (data / "labels.csv").string() +
                    " --window 3 --seed 3 --out " + out.string()),
            0);
  EXPECT_TRUE(fs::exists(out / "partitions.json"));
}

TEST(CliClusterTemporal, ExportSeriesFlag) {
  const fs::path data = generate_dataset("ct_export");
  const fs::path out = fresh_dir("ct_export_out");
  const fs::path series = out / "series.json";
  EXPECT_EQ(run_cli("cluster-temporal --input " + (data / "records.csv").string() +
                    " --window 2 --seed 1 --export-series " + series.string() + " --out " +
                    out.string()),
            0);
  const json exported = load_json(series);
  EXPECT_EQ(exported.size(), 6u);
  EXPECT_TRUE(exported[0].contains("timestamp"));
  EXPECT_TRUE(exported[0].contains("edges"));
  EXPECT_EQ(exported[0]["edges"][0].size(), 4u);  // [u, v, mean_ber, weight]
}

TEST(CliBaseline, RunsAllAlgorithms) {
  const fs::path data = generate_dataset("bl_data");
  for (const std::string algo : {"wca", "wcds", "kconid"}) {
    const fs::path out = fresh_dir("bl_" + algo);
    EXPECT_EQ(run_cli("baseline --input " + (data / "records.csv").string() + " --algorithm " +
                      algo + " --out " + out.string()),
              0)
        << algo;
    const json parts = load_json(out / "partitions.json");
    EXPECT_EQ(parts.size(), 6u);
    EXPECT_TRUE(fs::exists(out / "metrics.json"));
  }
}

TEST(CliBaseline, UnknownAlgorithmIsFlagError) {
  const fs::path data = generate_dataset("bl_bad");
  const fs::path out = fresh_dir("bl_bad_out");
  EXPECT_EQ(run_cli("baseline --input " + (data / "records.csv").string() +
                    " --algorithm nope --out " + out.string()),
            2);
}

TEST(CliMultiplex, RunsAndCoversEverySensor) {
  const fs::path data = generate_dataset("mx_data", "--layers 3");
  const fs::path out = fresh_dir("mx_out");
  EXPECT_EQ(run_cli("cluster-multiplex --input " + (data / "records.csv").string() +
                    " --layers 3 --algorithm mnlpa --seed 2 --out " + out.string()),
            0);
  const json alloc = load_json(out / "allocation.json");
  EXPECT_EQ(alloc["channels"].size(), 18u);
  EXPECT_EQ(alloc["communities"].size(), 18u);
  for (const char* key : {"Q", "penalty", "ber", "L"})
    EXPECT_TRUE(alloc["objective"].contains(key)) << key;
  EXPECT_TRUE(fs::exists(out / "partition.json"));
  EXPECT_TRUE(fs::exists(out / "report.json"));
}

TEST(CliMultiplex, ChannelBeyondLayersIsParseError) {
  const fs::path dir = fresh_dir("mx_range");
  std::ofstream csv(dir / "records.csv");
  csv << "timestamp,src,dst,ber,channel\n0,a,b,0.1,5\n";
  csv.close();
  const fs::path out = fresh_dir("mx_range_out");
  EXPECT_EQ(run_cli("cluster-multiplex --input " + (dir / "records.csv").string() +
                    " --layers 3 --seed 1 --out " + out.string()),
            3);
}

TEST(CliMultiplex, NegativeLambdaIsFlagError) {
  const fs::path data = generate_dataset("mx_lambda", "--layers 2");
  const fs::path out = fresh_dir("mx_lambda_out");
  EXPECT_EQ(run_cli("cluster-multiplex --input " + (data / "records.csv").string() +
                    " --layers 2 --seed 1 --lambda -1 --out " + out.string()),
            2);
}

TEST(CliSweep, BadRangeIsFlagError) {
  const fs::path data = generate_dataset("sw_bad");
  const fs::path out = fresh_dir("sw_bad_out");
  EXPECT_EQ(run_cli("sweep-window --input " + (data / "records.csv").string() +
                    " --windows 5..2 --seed 1 --out " + out.string()),
            2);
}

TEST(CliSweep, WritesOneRowPerWindow) {
  const fs::path data = generate_dataset("sw_ok");
  const fs::path out = fresh_dir("sw_ok_out");
  EXPECT_EQ(run_cli("sweep-window --input " + (data / "records.csv").string() +
                    " --windows 1..3 --seed 1 --out " + out.string()),
            0);
  const std::string csv = slurp(out / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);  // header + 3 rows
  EXPECT_EQ(csv.rfind("window_len,q_bar,mean_variation\n", 0), 0u);
}

TEST(CliSweep, WindowBeyondSeriesIsPipelineError) {
  const fs::path data = generate_dataset("sw_long");
  const fs::path out = fresh_dir("sw_long_out");
  EXPECT_EQ(run_cli("sweep-window --input " + (data / "records.csv").string() +
                    " --windows 1..40 --seed 1 --out " + out.string()),
            4);
}

TEST(CliParseError, MalformedInputExitsThree) {
  const fs::path dir = fresh_dir("parse_bad");
  std::ofstream csv(dir / "records.csv");
  csv << "timestamp,src,dst,ber\n0,a,a,0.1\n";
  csv.close();
  const fs::path out = fresh_dir("parse_bad_out");
  EXPECT_EQ(run_cli("cluster-temporal --input " + (dir / "records.csv").string() +
                    " --window 1 --seed 1 --out " + out.string()),
            3);
}

TEST(CliParseError, MissingInputFileIsFlagError) {
  const fs::path out = fresh_dir("missing_input");
  EXPECT_EQ(run_cli("cluster-temporal --input /nonexistent/x.csv --window 1 --seed 1 --out " +
                    out.string()),
            2);  // CLI11 ExistingFile check
}

}  // namespace
