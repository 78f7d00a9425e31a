#include "lanehouse/grid_search.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

#include "lanehouse/metrics.hpp"
#include "lanehouse/rng.hpp"

namespace lanehouse {

using nlohmann::json;

std::string to_string(Scoring s) {
  switch (s) {
    case Scoring::mse: return "mse";
    case Scoring::mae: return "mae";
    case Scoring::r2: return "r2";
  }
  throw std::logic_error("bad Scoring");
}

Scoring scoring_from_string(const std::string& s) {
  if (s == "mse") return Scoring::mse;
  if (s == "mae") return Scoring::mae;
  if (s == "r2") return Scoring::r2;
  throw std::invalid_argument("unknown scoring: " + s);
}

void GridSpec::validate() const {
  if (folds < 2) throw std::invalid_argument("folds must be >= 2");
  for (const auto& [name, values] : grid)
    if (values.empty()) throw std::invalid_argument("empty value list for grid key '" + name + "'");
}

namespace {

// Cartesian product in declared order: the last key varies fastest.
std::vector<ParamMap> expand_grid(const GridSpec& spec) {
  std::vector<ParamMap> points;
  points.push_back(spec.fixed_params);
  for (const auto& [name, values] : spec.grid) {
    std::vector<ParamMap> next;
    next.reserve(points.size() * values.size());
    for (const auto& base : points) {
      for (double v : values) {
        ParamMap pt = base;
        pt[name] = v;
        next.push_back(std::move(pt));
      }
    }
    points = std::move(next);
  }
  return points;
}

double score_of(Scoring scoring, const Vector& y, const Vector& yhat) {
  switch (scoring) {
    case Scoring::mse: return mse(y, yhat);
    case Scoring::mae: return mae(y, yhat);
    case Scoring::r2: return r_squared(y, yhat);
  }
  throw std::logic_error("bad Scoring");
}

}  // namespace

GridSearchResult grid_search(const DesignMatrix& d, const GridSpec& spec) {
  spec.validate();
  const long n = static_cast<long>(d.n());
  if (n < spec.folds) throw std::invalid_argument("fewer rows than folds");

  // Seeded fold assignment: shuffled indices cut into contiguous chunks.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = static_cast<int>(i);
  SplitMix64 rng = stream_rng(spec.seed, {0x666f6c6473ULL});  // "folds" stream
  shuffle(order, rng);

  std::vector<std::vector<int>> folds(static_cast<std::size_t>(spec.folds));
  for (std::size_t i = 0; i < order.size(); ++i)
    folds[i % static_cast<std::size_t>(spec.folds)].push_back(order[i]);

  GridSearchResult result;
  const bool maximize = spec.scoring == Scoring::r2;
  bool have_best = false;

  for (const ParamMap& point : expand_grid(spec)) {
    CvRow row;
    row.params = point;
    double sum = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      std::vector<int> train_idx;
      for (std::size_t g = 0; g < folds.size(); ++g)
        if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
      DesignMatrix train = d.select_rows(train_idx);
      DesignMatrix eval = d.select_rows(folds[f]);
      FittedModel model = fit_model(spec.family, point, train, spec.seed);
      double s = score_of(spec.scoring, eval.y, model.predict(eval.x));
      row.fold_scores.push_back(s);
      sum += s;
    }
    row.mean_score = sum / static_cast<double>(folds.size());
    // Strict comparison keeps the first grid point on ties.
    bool better = !have_best || (maximize ? row.mean_score > result.best_score
                                          : row.mean_score < result.best_score);
    if (better) {
      result.best_params = row.params;
      result.best_score = row.mean_score;
      have_best = true;
    }
    result.table.push_back(std::move(row));
  }
  return result;
}

json GridSearchResult::to_json() const {
  json table_json = json::array();
  for (const auto& row : table)
    table_json.push_back(
        {{"params", row.params}, {"fold_scores", row.fold_scores}, {"mean_score", row.mean_score}});
  return json{{"best_params", best_params}, {"best_score", best_score}, {"cv_table", table_json}};
}

}  // namespace lanehouse
