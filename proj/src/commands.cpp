#include "lanehouse/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "lanehouse/csv.hpp"
#include "lanehouse/encode.hpp"
#include "lanehouse/linear_models.hpp"

namespace lanehouse {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

const FeatureEntry* geo_entry(const FeatureSchema& schema) {
  for (const auto& e : schema.entries)
    if (e.name == "district" && e.kind == FeatureKind::categorical) return &e;
  for (const auto& e : schema.entries)
    if (e.kind == FeatureKind::categorical) return &e;
  return nullptr;
}

}  // namespace

FeatureSchema RunConfig::load_schema() const {
  if (schema_path.empty()) return FeatureSchema::default_lane_house();
  return FeatureSchema::load(schema_path);
}

std::vector<ModelSlot> RunConfig::default_model_slots() {
  std::vector<ModelSlot> slots;
  slots.push_back({"MLR", ModelFamily::mlr, {}, {}});
  slots.push_back({"RR", ModelFamily::ridge, {}, {{"lambda", {0.1, 1.0, 10.0, 100.0, 1000.0}}}});
  slots.push_back({"LR", ModelFamily::lasso, {}, {{"lambda_ratio", {0.001, 0.01, 0.05, 0.1}}}});
  slots.push_back({"DT",
                   ModelFamily::tree,
                   {{"max_depth", 5}, {"min_samples_leaf", 7}, {"min_samples_split", 2}},
                   {{"max_depth", {3, 5, 7, 10}}}});
  slots.push_back({"RF",
                   ModelFamily::forest,
                   {{"max_depth", 10},
                    {"min_samples_leaf", 5},
                    {"min_samples_split", 10},
                    {"n_estimators", 100}},
                   {}});
  return slots;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig cfg;
  cfg.dataset_path = j.value("dataset", "");
  cfg.schema_path = j.value("schema", "");
  cfg.out_dir = j.value("out", "out");
  cfg.seed = j.value("seed", 0ULL);
  if (j.contains("split")) {
    cfg.split.test_fraction = j["split"].value("test_fraction", 0.2);
    cfg.split.shuffled = j["split"].value("shuffled", true);
  }
  cfg.folds = j.value("folds", 5);
  if (j.contains("models")) {
    for (const auto& mj : j["models"]) {
      ModelSlot slot;
      slot.label = mj.at("label").get<std::string>();
      slot.family = model_family_from_string(mj.at("family").get<std::string>());
      if (mj.contains("params"))
        for (const auto& [key, value] : mj["params"].items()) slot.params[key] = value.get<double>();
      if (mj.contains("grid"))
        for (const auto& gj : mj["grid"])
          slot.grid.emplace_back(gj.at("name").get<std::string>(),
                                 gj.at("values").get<std::vector<double>>());
      cfg.models.push_back(std::move(slot));
    }
  } else {
    cfg.models = default_model_slots();
  }
  if (j.contains("llm")) {
    const auto& lj = j["llm"];
    cfg.llm.mock_mode = lj.value("mock", true);
    cfg.llm.endpoint_url = lj.value("endpoint_url", "");
    cfg.llm.model_name = lj.value("model_name", "");
    cfg.llm.temperature = lj.value("temperature", 0.0);
    cfg.llm.max_retries = lj.value("max_retries", 3);
    cfg.llm.timeout_seconds = lj.value("timeout_seconds", 30);
    cfg.llm.request_interval_ms = lj.value("request_interval_ms", 0);
    cfg.llm.workers = lj.value("workers", 1);
    cfg.llm.price_window_lo = lj.value("price_window_lo", 100.0);
    cfg.llm.price_window_hi = lj.value("price_window_hi", 1e6);
  }
  if (j.contains("k_list")) cfg.k_list = j["k_list"].get<std::vector<int>>();
  cfg.template_id = j.value("template", "tableii");
  cfg.split.seed = cfg.seed;
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  return from_json(j);
}

void write_matrix_csv(const DesignMatrix& d, const std::string& target_name, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& name : d.feature_names) out << name << ',';
  out << target_name << '\n';
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    for (Eigen::Index jx = 0; jx < d.p(); ++jx) out << fmt_full(d.x(i, jx)) << ',';
    out << fmt_full(d.y(i)) << '\n';
  }
}

DesignMatrix read_matrix_csv(const std::string& path) {
  RawTable t = load_csv(path);
  if (t.column_order.size() < 2) throw std::runtime_error("matrix artifact needs >= 2 columns");
  DesignMatrix d;
  d.feature_names.assign(t.column_order.begin(), t.column_order.end() - 1);
  const auto n = static_cast<Eigen::Index>(t.n_rows());
  const auto p = static_cast<Eigen::Index>(d.feature_names.size());
  d.x.resize(n, p);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = t.rows[static_cast<std::size_t>(i)];
    for (Eigen::Index jx = 0; jx < p; ++jx)
      d.x(i, jx) = parse_numeric_cell(row[static_cast<std::size_t>(jx)],
                                      "matrix row " + std::to_string(i));
    d.y(i) = parse_numeric_cell(row.back(), "matrix row " + std::to_string(i));
  }
  return d;
}

namespace {

// Per-district aggregates backing the exploratory plots.
void write_region_plotdata(const RawTable& cleaned, const FeatureSchema& schema,
                           const std::string& out_dir) {
  const auto* geo = geo_entry(schema);
  if (!geo) return;

  struct Agg {
    int count = 0;
    std::vector<double> rents, sizes, ssvalues;
  };
  std::map<std::string, Agg> by_region;
  const auto* ss_entry = [&]() -> const FeatureEntry* {
    for (const auto& e : schema.entries)
      if (!e.amenity_columns.empty()) return &e;
    return nullptr;
  }();

  for (std::size_t i = 0; i < cleaned.n_rows(); ++i) {
    RawRecord rec = cleaned.record(i);
    Agg& a = by_region[rec.at(geo->name)];
    ++a.count;
    a.rents.push_back(parse_numeric_cell(rec.at(schema.target_name), "rent"));
    if (rec.count("sqmeters"))
      a.sizes.push_back(parse_numeric_cell(rec.at("sqmeters"), "sqmeters"));
    if (ss_entry)
      a.ssvalues.push_back(compute_total_ssvalue(rec, ss_entry->amenity_columns, schema.truthy));
  }

  auto mean_of = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto median_of = [](std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
  };

  std::string counts = "district,count\n";
  std::string rents = "district,min_rent,median_rent,mean_rent,max_rent\n";
  std::string sizes = "district,mean_sqmeters\n";
  std::string ss = "district,mean_total_ssvalue\n";
  for (auto& [region, agg] : by_region) {
    counts += region + "," + std::to_string(agg.count) + "\n";
    std::sort(agg.rents.begin(), agg.rents.end());
    rents += region + "," + fmt_full(agg.rents.front()) + "," + fmt_full(median_of(agg.rents)) +
             "," + fmt_full(mean_of(agg.rents)) + "," + fmt_full(agg.rents.back()) + "\n";
    sizes += region + "," + fmt_full(mean_of(agg.sizes)) + "\n";
    ss += region + "," + fmt_full(mean_of(agg.ssvalues)) + "\n";
  }
  write_text(out_dir + "/plotdata_region_counts.csv", counts);
  write_text(out_dir + "/plotdata_region_rent.csv", rents);
  write_text(out_dir + "/plotdata_region_sqmeters.csv", sizes);
  write_text(out_dir + "/plotdata_region_ssvalue.csv", ss);
}

}  // namespace

int cmd_preprocess(const RunConfig& cfg) {
  // Fail fast on unresolvable inputs.
  if (cfg.dataset_path.empty() || !fs::exists(cfg.dataset_path))
    throw std::runtime_error("dataset not found: " + cfg.dataset_path);
  if (!cfg.schema_path.empty() && !fs::exists(cfg.schema_path))
    throw std::runtime_error("schema file not found: " + cfg.schema_path);
  FeatureSchema schema = cfg.load_schema();
  fs::create_directories(cfg.out_dir);

  RawTable raw = load_csv(cfg.dataset_path);
  const auto n_loaded = raw.n_rows();
  RawTable complete = drop_missing(raw, schema.source_columns());
  const auto n_complete = complete.n_rows();
  RawTable cleaned = dedup(complete);
  const auto n_cleaned = cleaned.n_rows();
  DesignMatrix d = build_design_matrix(cleaned, schema);

  write_csv(cleaned, cfg.out_dir + "/cleaned.csv");
  write_matrix_csv(d, schema.target_name, cfg.out_dir + "/matrix.csv");
  write_region_plotdata(cleaned, schema, cfg.out_dir);

  ordered_json summary;
  summary["stages"] = {{"loaded", n_loaded},
                       {"after_drop_missing", n_complete},
                       {"after_dedup", n_cleaned}};
  summary["n"] = d.n();
  summary["p"] = d.p();
  summary["feature_names"] = d.feature_names;
  write_json(cfg.out_dir + "/summary.json", summary);

  std::printf("preprocess: %zu -> %zu -> %zu rows, %lld features\n", n_loaded, n_complete,
              n_cleaned, static_cast<long long>(d.p()));
  return 0;
}

int cmd_compare(const RunConfig& cfg) {
  const std::string matrix_path = cfg.out_dir + "/matrix.csv";
  if (!fs::exists(matrix_path))
    throw std::runtime_error("preprocessed artifact missing: " + matrix_path +
                             " (run preprocess first)");
  DesignMatrix d = read_matrix_csv(matrix_path);

  std::vector<ModelConfig> configs;
  ordered_json grid_results = ordered_json::object();
  std::vector<std::string> warnings;

  for (const auto& slot : cfg.models) {
    ModelConfig mc{slot.label, slot.family, slot.params};
    if (!slot.grid.empty()) {
      try {
        GridSpec gs;
        gs.family = slot.family;
        gs.folds = cfg.folds;
        gs.seed = cfg.seed;
        gs.fixed_params = slot.params;
        for (const auto& [name, values] : slot.grid) {
          if (name == "lambda_ratio") {
            // Ratios of the data's lambda_max, resolved here.
            double lmax = lasso_lambda_max(d);
            std::vector<double> lambdas;
            for (double r : values) lambdas.push_back(r * lmax);
            gs.grid.emplace_back("lambda", lambdas);
          } else {
            gs.grid.emplace_back(name, values);
          }
        }
        GridSearchResult res = grid_search(d, gs);
        for (const auto& [key, value] : res.best_params) mc.params[key] = value;
        grid_results[slot.label] = res.to_json();
      } catch (const std::exception& e) {
        warnings.push_back(slot.label + ": grid search failed: " + e.what());
      }
    }
    configs.push_back(std::move(mc));
  }

  ComparisonTable table = compare_models(d, cfg.split, configs);
  for (const auto& row : table.rows)
    if (!row.error.empty()) warnings.push_back(row.label + ": " + row.error);

  ordered_json report;
  report["comparison"] = table.to_json();
  report["grid_search"] = grid_results;
  report["warnings"] = warnings;
  report["seed"] = cfg.seed;
  write_json(cfg.out_dir + "/comparison.json", report);
  write_text(cfg.out_dir + "/comparison.md", table.to_markdown());

  std::string plot = "label,mse,mae,r_squared\n";
  for (const auto& row : table.rows) {
    if (!row.metrics) continue;
    plot += row.label + "," + fmt_full(row.metrics->mse) + "," + fmt_full(row.metrics->mae) + "," +
            fmt_full(row.metrics->r_squared) + "\n";
  }
  write_text(cfg.out_dir + "/plotdata_model_comparison.csv", plot);

  std::printf("compare: %zu models, best MSE %s\n", table.rows.size(), table.best_mse.c_str());
  return 0;
}

int cmd_llm(const RunConfig& cfg) {
  const std::string cleaned_path = cfg.out_dir + "/cleaned.csv";
  if (!fs::exists(cleaned_path))
    throw std::runtime_error("preprocessed artifact missing: " + cleaned_path +
                             " (run preprocess first)");
  FeatureSchema schema = cfg.load_schema();
  RawTable cleaned = load_csv(cleaned_path);
  DesignMatrix d = build_design_matrix(cleaned, schema);
  cfg.llm.validate();
  if (!cfg.llm.mock_mode && !std::getenv(cfg.llm.api_key_env.c_str()))
    throw std::runtime_error("live mode requires " + cfg.llm.api_key_env);

  auto [train_idx, test_idx] = split_indices(static_cast<long>(d.n()), cfg.split);
  std::vector<RawRecord> train_records, test_records;
  Vector train_rents(static_cast<Eigen::Index>(train_idx.size()));
  Vector truths(static_cast<Eigen::Index>(test_idx.size()));
  for (std::size_t i = 0; i < train_idx.size(); ++i) {
    train_records.push_back(cleaned.record(static_cast<std::size_t>(train_idx[i])));
    train_rents(static_cast<Eigen::Index>(i)) = d.y(train_idx[i]);
  }
  for (std::size_t i = 0; i < test_idx.size(); ++i) {
    test_records.push_back(cleaned.record(static_cast<std::size_t>(test_idx[i])));
    truths(static_cast<Eigen::Index>(i)) = d.y(test_idx[i]);
  }

  const std::string runlog_path = cfg.out_dir + "/runlog.jsonl";
  fs::remove(runlog_path);

  const std::string method = cfg.llm.mock_mode
                                 ? "mock"
                                 : (cfg.llm.model_name.empty() ? "live" : cfg.llm.model_name);
  ordered_json rows = ordered_json::array();
  std::string md = "| Method | MSE | MAE | R Squared |\n|---|---|---|---|\n";
  std::string plot = "k,mse,mae,r_squared\n";

  for (int k : cfg.k_list) {
    LlmRun run = predict_llm(test_records, train_records, train_rents, schema, k, cfg.llm,
                             cfg.template_id);
    append_run_log(run, runlog_path);
    LlmEvaluation eval = evaluate_llm_run(run, truths);
    ordered_json row;
    row["k"] = k;
    row["method"] = method + "(" + std::to_string(k) + "-shot)";
    row["metrics"] = eval.to_json();
    rows.push_back(std::move(row));

    char r2buf[32];
    std::snprintf(r2buf, sizeof(r2buf), "%.2f", eval.metrics.r_squared);
    md += "| " + method + "(" + std::to_string(k) + "-shot) | " +
          format_metric(eval.metrics.mse) + " | " + format_metric(eval.metrics.mae) + " | " +
          r2buf + " |\n";
    plot += std::to_string(k) + "," + fmt_full(eval.metrics.mse) + "," +
            fmt_full(eval.metrics.mae) + "," + fmt_full(eval.metrics.r_squared) + "\n";
  }

  ordered_json report;
  report["template"] = cfg.template_id;
  report["mock"] = cfg.llm.mock_mode;
  report["rows"] = rows;
  report["seed"] = cfg.seed;
  write_json(cfg.out_dir + "/llm_report.json", report);
  write_text(cfg.out_dir + "/llm_report.md", md);
  write_text(cfg.out_dir + "/plotdata_llm_shots.csv", plot);

  std::printf("llm: %zu k values over %zu test rows (%s)\n", cfg.k_list.size(),
              test_records.size(), cfg.llm.mock_mode ? "mock" : "live");
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  std::string md = "| Method | MSE | MAE | R Squared |\n|---|---|---|---|\n";
  ordered_json combined;
  bool any = false;

  auto read_json_file = [](const std::string& path) {
    std::ifstream in(path);
    ordered_json j;
    in >> j;
    return j;
  };

  const std::string cmp_path = cfg.out_dir + "/comparison.json";
  if (fs::exists(cmp_path)) {
    ordered_json cj = read_json_file(cmp_path);
    combined["comparison"] = cj;
    for (const auto& row : cj.at("comparison").at("rows")) {
      if (!row.contains("metrics")) continue;
      char r2buf[32];
      std::snprintf(r2buf, sizeof(r2buf), "%.2f", row["metrics"]["r_squared"].get<double>());
      md += "| " + row["label"].get<std::string>() + " | " +
            format_metric(row["metrics"]["mse"].get<double>()) + " | " +
            format_metric(row["metrics"]["mae"].get<double>()) + " | " + r2buf + " |\n";
    }
    any = true;
  }
  const std::string llm_path = cfg.out_dir + "/llm_report.json";
  if (fs::exists(llm_path)) {
    ordered_json lj = read_json_file(llm_path);
    combined["llm"] = lj;
    for (const auto& row : lj.at("rows")) {
      char r2buf[32];
      std::snprintf(r2buf, sizeof(r2buf), "%.2f", row["metrics"]["r_squared"].get<double>());
      md += "| " + row["method"].get<std::string>() + " | " +
            format_metric(row["metrics"]["mse"].get<double>()) + " | " +
            format_metric(row["metrics"]["mae"].get<double>()) + " | " + r2buf + " |\n";
    }
    any = true;
  }
  if (!any)
    throw std::runtime_error("nothing to report: run compare and/or llm first in " + cfg.out_dir);

  write_text(cfg.out_dir + "/report.md", md);
  write_json(cfg.out_dir + "/report.json", combined);
  std::printf("report: written to %s/report.md\n", cfg.out_dir.c_str());
  return 0;
}

}  // namespace lanehouse
