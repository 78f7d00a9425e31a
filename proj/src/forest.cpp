#include "lanehouse/forest.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "lanehouse/rng.hpp"

namespace lanehouse {

using nlohmann::json;

void ForestParams::validate() const {
  tree.validate();
  if (n_estimators < 1) throw std::invalid_argument("n_estimators must be >= 1");
  if (!(feature_fraction > 0 && feature_fraction <= 1))
    throw std::invalid_argument("feature_fraction must be in (0, 1]");
}

namespace {

std::vector<int> default_bootstrap(std::uint64_t seed, int tree_index, int n) {
  SplitMix64 rng = stream_rng(seed, {static_cast<std::uint64_t>(tree_index)});
  std::vector<int> rows(static_cast<std::size_t>(n));
  for (auto& r : rows) r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  return rows;
}

// Draws k distinct feature indices via partial Fisher-Yates, returned
// sorted so the split tie-break stays by feature index.
std::vector<int> draw_features(SplitMix64& rng, int p, int k) {
  std::vector<int> pool(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

Forest fit_forest(const DesignMatrix& train, const ForestParams& params,
                  const BootstrapSampler& bootstrap) {
  params.validate();
  const int n = static_cast<int>(train.n());
  if (n < 1) throw std::invalid_argument("empty training set");
  const int p = static_cast<int>(train.p());
  const int k = std::min(p, static_cast<int>(std::ceil(params.feature_fraction * p)));

  Forest forest;
  forest.params = params;
  forest.trees.reserve(static_cast<std::size_t>(params.n_estimators));
  forest.oob_indices.reserve(static_cast<std::size_t>(params.n_estimators));

  for (int b = 1; b <= params.n_estimators; ++b) {
    std::vector<int> rows = bootstrap ? bootstrap(b, n) : default_bootstrap(params.seed, b, n);

    std::vector<bool> in_bag(static_cast<std::size_t>(n), false);
    for (int r : rows) in_bag.at(static_cast<std::size_t>(r)) = true;
    std::vector<int> oob;
    for (int i = 0; i < n; ++i)
      if (!in_bag[static_cast<std::size_t>(i)]) oob.push_back(i);
    forest.oob_indices.push_back(std::move(oob));

    FeatureSampler sampler;
    if (k < p) {
      std::uint64_t seed = params.seed;
      sampler = [seed, b, p, k](int node_id) {
        SplitMix64 rng = stream_rng(seed, {static_cast<std::uint64_t>(b),
                                           static_cast<std::uint64_t>(node_id)});
        return draw_features(rng, p, k);
      };
    }
    forest.trees.push_back(fit_tree(train, params.tree, sampler, &rows));
  }
  return forest;
}

double predict_forest(const Forest& forest, const Eigen::Ref<const Vector>& row) {
  if (forest.trees.empty()) throw std::invalid_argument("empty forest");
  double sum = 0;
  for (const auto& t : forest.trees) sum += predict_tree(*t, row);
  return sum / static_cast<double>(forest.trees.size());
}

Vector predict_forest_all(const Forest& forest, const Eigen::Ref<const Matrix>& x) {
  Vector out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Vector row = x.row(i).transpose();
    out(i) = predict_forest(forest, row);
  }
  return out;
}

json Forest::to_json() const {
  json trees_json = json::array();
  for (const auto& t : trees) trees_json.push_back(tree_to_json(*t));
  return json{{"format_version", 1},
              {"kind", "forest"},
              {"params",
               {{"max_depth", params.tree.max_depth},
                {"min_samples_leaf", params.tree.min_samples_leaf},
                {"min_samples_split", params.tree.min_samples_split},
                {"n_estimators", params.n_estimators},
                {"feature_fraction", params.feature_fraction},
                {"seed", params.seed}}},
              {"trees", std::move(trees_json)}};
}

Forest Forest::from_json(const json& j) {
  if (j.at("format_version").get<int>() != 1)
    throw std::runtime_error("unsupported forest format version");
  Forest f;
  const auto& pj = j.at("params");
  f.params.tree.max_depth = pj.at("max_depth").get<int>();
  f.params.tree.min_samples_leaf = pj.at("min_samples_leaf").get<int>();
  f.params.tree.min_samples_split = pj.at("min_samples_split").get<int>();
  f.params.n_estimators = pj.at("n_estimators").get<int>();
  f.params.feature_fraction = pj.at("feature_fraction").get<double>();
  f.params.seed = pj.at("seed").get<std::uint64_t>();
  for (const auto& tj : j.at("trees")) f.trees.push_back(tree_from_json(tj));
  return f;
}

}  // namespace lanehouse
