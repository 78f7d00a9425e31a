#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>

#include "lanehouse/forest.hpp"
#include "lanehouse/linear_models.hpp"
#include "lanehouse/tree.hpp"
#include "lanehouse/types.hpp"

namespace lanehouse {

enum class ModelFamily { mlr, ridge, lasso, tree, forest };

std::string to_string(ModelFamily f);
ModelFamily model_family_from_string(const std::string& s);

// Numeric hyperparameters keyed by name. Linear families understand
// lambda, tolerance, max_iterations, standardize (0/1); trees understand
// max_depth, min_samples_leaf, min_samples_split; forests additionally
// n_estimators, feature_fraction, seed.
using ParamMap = std::map<std::string, double>;

class FittedModel {
 public:
  explicit FittedModel(LinearModel m) : model_(std::move(m)) {}
  explicit FittedModel(std::shared_ptr<const TreeNode> t) : model_(std::move(t)) {}
  explicit FittedModel(std::shared_ptr<const Forest> f) : model_(std::move(f)) {}

  Vector predict(const Eigen::Ref<const Matrix>& x) const;

 private:
  std::variant<LinearModel, std::shared_ptr<const TreeNode>, std::shared_ptr<const Forest>> model_;
};

// Unknown parameter names and invalid values throw.
FittedModel fit_model(ModelFamily family, const ParamMap& params, const DesignMatrix& train,
                      std::uint64_t default_seed = 0);

}  // namespace lanehouse
