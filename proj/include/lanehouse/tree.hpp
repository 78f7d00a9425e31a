#pragma once

#include <functional>
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <vector>

#include "lanehouse/types.hpp"

namespace lanehouse {

struct TreeParams {
  int max_depth = 5;
  int min_samples_leaf = 7;
  int min_samples_split = 2;

  void validate() const;
};

// Internal nodes carry (feature_index, threshold); leaves carry the mean
// training target and the sample count that reached them.
struct TreeNode {
  int feature_index = -1;
  double threshold = 0.0;
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  double value = 0.0;
  int count = 0;

  bool is_leaf() const { return left == nullptr; }
  int depth() const;
};

struct SplitChoice {
  int feature_index = 0;
  double threshold = 0.0;
  double sse_reduction = 0.0;
};

// Best midpoint split over candidate features, maximizing SSE reduction
// with both children >= min_samples_leaf. Ties broken by (lower feature
// index, lower threshold); nullopt when no admissible split improves SSE.
std::optional<SplitChoice> best_split(const Eigen::Ref<const Matrix>& x,
                                      const Eigen::Ref<const Vector>& y,
                                      const std::vector<int>& rows,
                                      const std::vector<int>& feature_candidates,
                                      int min_samples_leaf);

// Candidate features for the node with the given pre-order id; an empty
// function means all features.
using FeatureSampler = std::function<std::vector<int>(int node_id)>;

std::unique_ptr<TreeNode> fit_tree(const DesignMatrix& train, const TreeParams& params,
                                   const FeatureSampler& sampler = {},
                                   const std::vector<int>* row_indices = nullptr);

double predict_tree(const TreeNode& tree, const Eigen::Ref<const Vector>& row);

nlohmann::json tree_to_json(const TreeNode& tree);
std::unique_ptr<TreeNode> tree_from_json(const nlohmann::json& j);

}  // namespace lanehouse
