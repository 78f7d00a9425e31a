#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "lanehouse/compare.hpp"
#include "lanehouse/grid_search.hpp"
#include "lanehouse/llm_client.hpp"
#include "lanehouse/schema.hpp"
#include "lanehouse/split.hpp"
#include "lanehouse/types.hpp"

namespace lanehouse {

// One model slot of the comparison: fixed params plus an optional tuning
// grid resolved by cmd_compare before the final fit.
struct ModelSlot {
  std::string label;
  ModelFamily family = ModelFamily::mlr;
  ParamMap params;
  std::vector<std::pair<std::string, std::vector<double>>> grid;
};

struct RunConfig {
  std::string dataset_path;
  std::string schema_path;  // empty = bundled default schema
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  SplitSpec split;
  std::vector<ModelSlot> models;
  int folds = 5;
  LlmConfig llm;
  std::vector<int> k_list = {0, 1, 5, 10};
  std::string template_id = "tableii";

  FeatureSchema load_schema() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::string& path);

  // The five classical regressors with their stock hyperparameters and
  // small tuning grids.
  static std::vector<ModelSlot> default_model_slots();
};

// Matrix artifact: CSV with feature names plus the target as last column,
// round-tripping doubles exactly.
void write_matrix_csv(const DesignMatrix& d, const std::string& target_name, const std::string& path);
DesignMatrix read_matrix_csv(const std::string& path);

// Pipeline stage counts + matrix/cleaned artifacts + per-region aggregates.
int cmd_preprocess(const RunConfig& cfg);
// Grid search per tunable family, then the shared-split comparison table.
int cmd_compare(const RunConfig& cfg);
// Mock or live shot sweeps over k_list with run log.
int cmd_llm(const RunConfig& cfg);
// Merges comparison and LLM reports into one table.
int cmd_report(const RunConfig& cfg);

}  // namespace lanehouse
