#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lanehouse/metrics.hpp"
#include "lanehouse/regressors.hpp"
#include "lanehouse/split.hpp"
#include "lanehouse/types.hpp"

namespace lanehouse {

struct ModelConfig {
  std::string label;
  ModelFamily family = ModelFamily::mlr;
  ParamMap params;
};

struct ComparisonRow {
  std::string label;
  std::optional<MetricsReport> metrics;
  std::string error;  // non-empty when the fit failed; row kept
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  std::string best_mse;
  std::string best_mae;
  std::string best_r2;

  nlohmann::json to_json() const;
  std::string to_markdown() const;
};

// Fits every config on one shared train split and scores on the shared
// test split. Fit errors annotate their row instead of aborting.
ComparisonTable compare_models(const DesignMatrix& d, const SplitSpec& split,
                               const std::vector<ModelConfig>& configs);

// Fixed-width scientific formatting used by the markdown table.
std::string format_metric(double v);

}  // namespace lanehouse
