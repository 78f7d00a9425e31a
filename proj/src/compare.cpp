#include "lanehouse/compare.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace lanehouse {

using nlohmann::json;

ComparisonTable compare_models(const DesignMatrix& d, const SplitSpec& split,
                               const std::vector<ModelConfig>& configs) {
  if (configs.empty()) throw std::invalid_argument("no model configs");
  auto [train, test] = train_test_split(d, split);

  ComparisonTable table;
  for (const auto& cfg : configs) {
    ComparisonRow row;
    row.label = cfg.label;
    try {
      FittedModel model = fit_model(cfg.family, cfg.params, train, split.seed);
      row.metrics = evaluate_predictions(test.y, model.predict(test.x));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }

  bool first = true;
  double best_mse = 0, best_mae = 0, best_r2 = 0;
  for (const auto& row : table.rows) {
    if (!row.metrics) continue;
    if (first || row.metrics->mse < best_mse) {
      best_mse = row.metrics->mse;
      table.best_mse = row.label;
    }
    if (first || row.metrics->mae < best_mae) {
      best_mae = row.metrics->mae;
      table.best_mae = row.label;
    }
    if (first || row.metrics->r_squared > best_r2) {
      best_r2 = row.metrics->r_squared;
      table.best_r2 = row.label;
    }
    first = false;
  }
  return table;
}

std::string format_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

json ComparisonTable::to_json() const {
  json rows_json = json::array();
  for (const auto& row : rows) {
    json rj{{"label", row.label}};
    if (row.metrics)
      rj["metrics"] = row.metrics->to_json();
    else
      rj["error"] = row.error;
    rows_json.push_back(std::move(rj));
  }
  return json{{"rows", rows_json},
              {"winners", {{"mse", best_mse}, {"mae", best_mae}, {"r_squared", best_r2}}}};
}

std::string ComparisonTable::to_markdown() const {
  std::string md = "| Method | MSE | MAE | R Squared |\n|---|---|---|---|\n";
  for (const auto& row : rows) {
    md += "| " + row.label + " | ";
    if (row.metrics) {
      char r2buf[32];
      std::snprintf(r2buf, sizeof(r2buf), "%.2f", row.metrics->r_squared);
      md += format_metric(row.metrics->mse) + " | " + format_metric(row.metrics->mae) + " | " +
            r2buf + " |\n";
    } else {
      md += "error: " + row.error + " | - | - |\n";
    }
  }
  md += "\nBest MSE: " + best_mse + "; best MAE: " + best_mae + "; best R Squared: " + best_r2 + "\n";
  return md;
}

}  // namespace lanehouse
