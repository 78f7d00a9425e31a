#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>

#include "lanehouse/commands.hpp"
#include "lanehouse/csv.hpp"
#include "support/fixtures.hpp"

using namespace lanehouse;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& child = "") const {
    return child.empty() ? path.string() : (path / child).string();
  }
};

RunConfig base_config(const TempDir& dir, const std::string& dataset) {
  RunConfig cfg;
  cfg.dataset_path = dataset;
  cfg.out_dir = dir.str("out");
  cfg.seed = 1;
  cfg.split.seed = 1;
  return cfg;
}

nlohmann::json read_json_file(const std::string& path) {
  return nlohmann::json::parse(lanehouse::testing::read_file(path));
}

}  // namespace

TEST_CASE("preprocess reports the three stage counts") {
  TempDir dir("lanehouse_cli_stages");
  RawTable t = lanehouse::testing::synthetic_table(50, 201);
  t.rows[7][1] = "";           // one incomplete row
  t.rows.push_back(t.rows[3]);  // one exact duplicate
  write_csv(t, dir.str("data.csv"));

  RunConfig cfg = base_config(dir, dir.str("data.csv"));
  CHECK(cmd_preprocess(cfg) == 0);

  auto summary = read_json_file(cfg.out_dir + "/summary.json");
  CHECK(summary["stages"]["loaded"] == 51);
  CHECK(summary["stages"]["after_drop_missing"] == 50);
  CHECK(summary["stages"]["after_dedup"] == 49);
  CHECK(summary["p"] == 22);
  CHECK(summary["n"] == 49);

  RawTable cleaned = load_csv(cfg.out_dir + "/cleaned.csv");
  CHECK(cleaned.n_rows() == 49);
  CHECK(fs::exists(cfg.out_dir + "/plotdata_region_counts.csv"));
  CHECK(fs::exists(cfg.out_dir + "/plotdata_region_rent.csv"));
}

TEST_CASE("preprocess on already-clean data changes nothing") {
  TempDir dir("lanehouse_cli_clean");
  RawTable t = lanehouse::testing::synthetic_table(40, 203);
  write_csv(t, dir.str("data.csv"));
  RunConfig cfg = base_config(dir, dir.str("data.csv"));
  cmd_preprocess(cfg);
  auto summary = read_json_file(cfg.out_dir + "/summary.json");
  CHECK(summary["stages"]["loaded"] == 40);
  CHECK(summary["stages"]["after_dedup"] == 40);
  RawTable cleaned = load_csv(cfg.out_dir + "/cleaned.csv");
  CHECK(cleaned.rows == t.rows);
}

TEST_CASE("matrix artifact round-trips doubles exactly") {
  TempDir dir("lanehouse_cli_matrix");
  DesignMatrix d = lanehouse::testing::random_design(30, 4, 205);
  write_matrix_csv(d, "rent", dir.str("matrix.csv"));
  DesignMatrix back = read_matrix_csv(dir.str("matrix.csv"));
  CHECK(back.feature_names == d.feature_names);
  CHECK(lanehouse::testing::bit_equal(back.x, d.x));
  CHECK(lanehouse::testing::bit_equal(back.y, d.y));
}

TEST_CASE("preprocess fails fast on missing inputs") {
  TempDir dir("lanehouse_cli_missing");
  RunConfig cfg = base_config(dir, dir.str("nope.csv"));
  CHECK_THROWS_AS(cmd_preprocess(cfg), std::runtime_error);

  RawTable t = lanehouse::testing::synthetic_table(10, 207);
  write_csv(t, dir.str("data.csv"));
  cfg.dataset_path = dir.str("data.csv");
  cfg.schema_path = dir.str("no_schema.json");
  CHECK_THROWS_AS(cmd_preprocess(cfg), std::runtime_error);
}

TEST_CASE("compare requires the preprocess artifact") {
  TempDir dir("lanehouse_cli_nocompare");
  RunConfig cfg = base_config(dir, "");
  CHECK_THROWS_AS(cmd_compare(cfg), std::runtime_error);
  CHECK_THROWS_AS(cmd_llm(cfg), std::runtime_error);
  CHECK_THROWS_AS(cmd_report(cfg), std::runtime_error);
}

TEST_CASE("compare with a singleton model slot") {
  TempDir dir("lanehouse_cli_single");
  write_csv(lanehouse::testing::synthetic_table(120, 209), dir.str("data.csv"));
  RunConfig cfg = base_config(dir, dir.str("data.csv"));
  cfg.models = {{"MLR", ModelFamily::mlr, {}, {}}};
  cmd_preprocess(cfg);
  CHECK(cmd_compare(cfg) == 0);

  auto report = read_json_file(cfg.out_dir + "/comparison.json");
  REQUIRE(report["comparison"]["rows"].size() == 1);
  CHECK(report["comparison"]["rows"][0]["label"] == "MLR");
  CHECK(report["comparison"]["winners"]["mse"] == "MLR");
  CHECK(report["warnings"].empty());
  std::string md = lanehouse::testing::read_file(cfg.out_dir + "/comparison.md");
  CHECK(md.find("| Method | MSE | MAE | R Squared |") != std::string::npos);
}

TEST_CASE("full pipeline runs and reruns byte-identically") {
  TempDir dir("lanehouse_cli_full");
  write_csv(lanehouse::testing::synthetic_table(200, 211), dir.str("data.csv"));
  RunConfig cfg = base_config(dir, dir.str("data.csv"));
  // Keep the sweep small so the suite stays quick.
  cfg.models = RunConfig::default_model_slots();
  for (auto& slot : cfg.models)
    if (slot.label == "RF") slot.params["n_estimators"] = 20;
  cfg.k_list = {0, 3};

  auto run_all = [&] {
    cmd_preprocess(cfg);
    cmd_compare(cfg);
    cmd_llm(cfg);
    cmd_report(cfg);
  };
  run_all();

  auto comparison = read_json_file(cfg.out_dir + "/comparison.json");
  CHECK(comparison["comparison"]["rows"].size() == 5);
  for (const auto& row : comparison["comparison"]["rows"]) CHECK(row.contains("metrics"));

  auto llm = read_json_file(cfg.out_dir + "/llm_report.json");
  CHECK(llm["rows"].size() == 2);
  CHECK(llm["mock"] == true);
  for (const auto& row : llm["rows"]) CHECK(row["metrics"]["coverage"] == 1.0);

  // The run log holds one line per (k, test row) pair; test = 40 of 200.
  std::string runlog = lanehouse::testing::read_file(cfg.out_dir + "/runlog.jsonl");
  CHECK(std::count(runlog.begin(), runlog.end(), '\n') == 2 * 40);

  auto merged = read_json_file(cfg.out_dir + "/report.json");
  CHECK(merged.contains("comparison"));
  CHECK(merged.contains("llm"));
  std::string report_md = lanehouse::testing::read_file(cfg.out_dir + "/report.md");
  CHECK(report_md.find("MLR") != std::string::npos);
  CHECK(report_md.find("0-shot") != std::string::npos);

  const std::vector<std::string> artifacts = {
      "summary.json",      "cleaned.csv",   "matrix.csv",    "comparison.json",
      "comparison.md",     "llm_report.json", "llm_report.md", "runlog.jsonl",
      "report.json",       "report.md",     "plotdata_model_comparison.csv",
      "plotdata_llm_shots.csv", "plotdata_region_rent.csv"};
  std::map<std::string, std::string> before;
  for (const auto& a : artifacts) before[a] = lanehouse::testing::read_file(cfg.out_dir + "/" + a);
  run_all();
  for (const auto& a : artifacts)
    CHECK(lanehouse::testing::read_file(cfg.out_dir + "/" + a) == before[a]);
}

TEST_CASE("config file parsing with overridable defaults") {
  TempDir dir("lanehouse_cli_config");
  nlohmann::json j;
  j["dataset"] = "some.csv";
  j["seed"] = 9;
  j["split"]["test_fraction"] = 0.3;
  j["k_list"] = {0, 2};
  j["template"] = "compact";
  j["llm"] = {{"mock", true}, {"workers", 4}};
  nlohmann::json slot;
  slot["label"] = "DT";
  slot["family"] = "tree";
  slot["params"] = {{"max_depth", 4}};
  nlohmann::json grid_entry;
  grid_entry["name"] = "max_depth";
  grid_entry["values"] = {2, 4};
  slot["grid"] = nlohmann::json::array({grid_entry});
  j["models"] = nlohmann::json::array({slot});
  std::ofstream(dir.str("config.json")) << j.dump();
  RunConfig cfg = RunConfig::from_file(dir.str("config.json"));
  CHECK(cfg.dataset_path == "some.csv");
  CHECK(cfg.seed == 9);
  CHECK(cfg.split.seed == 9);
  CHECK(cfg.split.test_fraction == 0.3);
  CHECK(cfg.k_list == std::vector<int>{0, 2});
  CHECK(cfg.template_id == "compact");
  CHECK(cfg.llm.workers == 4);
  REQUIRE(cfg.models.size() == 1);
  CHECK(cfg.models[0].family == ModelFamily::tree);
  CHECK(cfg.models[0].params.at("max_depth") == 4);
  REQUIRE(cfg.models[0].grid.size() == 1);
  CHECK(cfg.models[0].grid[0].second == std::vector<double>{2, 4});

  // No models key: the five stock slots.
  RunConfig defaults = RunConfig::from_json(nlohmann::json{{"dataset", "x.csv"}});
  REQUIRE(defaults.models.size() == 5);
  CHECK(defaults.models[0].label == "MLR");
  CHECK(defaults.models[4].label == "RF");

  CHECK_THROWS_AS(RunConfig::from_file(dir.str("absent.json")), std::runtime_error);
}
