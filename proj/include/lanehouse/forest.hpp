#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "lanehouse/tree.hpp"
#include "lanehouse/types.hpp"

namespace lanehouse {

struct ForestParams {
  TreeParams tree{10, 5, 10};
  int n_estimators = 100;
  double feature_fraction = 1.0 / 3.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Test hook: supplies the row multiset for tree b over n rows, replacing
// the default with-replacement bootstrap.
using BootstrapSampler = std::function<std::vector<int>(int tree_index, int n)>;

struct Forest {
  std::vector<std::unique_ptr<TreeNode>> trees;
  ForestParams params;
  std::vector<std::vector<int>> oob_indices;  // rows absent from each tree's bootstrap

  nlohmann::json to_json() const;
  static Forest from_json(const nlohmann::json& j);
};

// Bagged trees. Bootstrap b draws from stream (seed, b); split candidates
// at node k of tree b draw ceil(feature_fraction * p) features from
// stream (seed, b, k). Reproducible given (data, params).
Forest fit_forest(const DesignMatrix& train, const ForestParams& params,
                  const BootstrapSampler& bootstrap = {});

// Arithmetic mean of the tree predictions, summed left to right.
double predict_forest(const Forest& forest, const Eigen::Ref<const Vector>& row);
Vector predict_forest_all(const Forest& forest, const Eigen::Ref<const Matrix>& x);

}  // namespace lanehouse
