#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "lanehouse/regressors.hpp"
#include "lanehouse/types.hpp"

namespace lanehouse {

enum class Scoring { mse, mae, r2 };

std::string to_string(Scoring s);
Scoring scoring_from_string(const std::string& s);

struct GridSpec {
  ModelFamily family = ModelFamily::mlr;
  // Cartesian product over values, iterated in declared order.
  std::vector<std::pair<std::string, std::vector<double>>> grid;
  int folds = 5;
  Scoring scoring = Scoring::mse;
  std::uint64_t seed = 0;
  ParamMap fixed_params;  // applied to every grid point

  void validate() const;
};

struct CvRow {
  ParamMap params;
  std::vector<double> fold_scores;
  double mean_score = 0;
};

struct GridSearchResult {
  ParamMap best_params;
  double best_score = 0;
  std::vector<CvRow> table;

  nlohmann::json to_json() const;
};

// Seeded k-fold cross validation over every grid point; best is the
// argmin of the mean score (argmax for r2), ties broken by declared
// iteration order.
GridSearchResult grid_search(const DesignMatrix& d, const GridSpec& spec);

}  // namespace lanehouse
