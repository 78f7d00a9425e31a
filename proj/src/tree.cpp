#include "lanehouse/tree.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace lanehouse {

using nlohmann::json;

void TreeParams::validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (min_samples_leaf < 1) throw std::invalid_argument("min_samples_leaf must be >= 1");
  if (min_samples_split < 2) throw std::invalid_argument("min_samples_split must be >= 2");
}

int TreeNode::depth() const {
  if (is_leaf()) return 0;
  return 1 + std::max(left->depth(), right->depth());
}

namespace {

// Mean over targets summed in sorted order, so that permuting training
// rows cannot change leaf values.
double sorted_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::optional<SplitChoice> best_split(const Eigen::Ref<const Matrix>& x,
                                      const Eigen::Ref<const Vector>& y,
                                      const std::vector<int>& rows,
                                      const std::vector<int>& feature_candidates,
                                      int min_samples_leaf) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  if (m < 2) return std::nullopt;

  std::optional<SplitChoice> best;
  std::vector<std::pair<double, double>> pairs(rows.size());

  std::vector<int> candidates = feature_candidates;
  std::sort(candidates.begin(), candidates.end());

  for (int f : candidates) {
    for (std::size_t i = 0; i < rows.size(); ++i) pairs[i] = {x(rows[i], f), y(rows[i])};
    // Lexicographic sort keeps the split scan independent of row order.
    std::sort(pairs.begin(), pairs.end());

    double total = 0;
    for (const auto& pr : pairs) total += pr.second;
    const double parent_term = total * total / static_cast<double>(m);
    const double gain_eps = 1e-12 * (1.0 + std::abs(parent_term));

    double left_sum = 0;
    for (Eigen::Index i = 1; i < m; ++i) {
      left_sum += pairs[i - 1].second;
      if (pairs[i - 1].first == pairs[i].first) continue;
      const Eigen::Index nl = i, nr = m - i;
      if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
      double right_sum = total - left_sum;
      double gain = left_sum * left_sum / static_cast<double>(nl) +
                    right_sum * right_sum / static_cast<double>(nr) - parent_term;
      if (gain <= gain_eps) continue;
      if (!best || gain > best->sse_reduction) {
        best = SplitChoice{f, 0.5 * (pairs[i - 1].first + pairs[i].first), gain};
      }
    }
  }
  return best;
}

namespace {

struct FitContext {
  const DesignMatrix& data;
  const TreeParams& params;
  const FeatureSampler& sampler;
  std::vector<int> all_features;
  int node_counter = 0;
};

std::unique_ptr<TreeNode> build_node(FitContext& ctx, const std::vector<int>& rows, int depth) {
  const int node_id = ctx.node_counter++;
  auto node = std::make_unique<TreeNode>();
  node->count = static_cast<int>(rows.size());
  std::vector<double> targets(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) targets[i] = ctx.data.y(rows[i]);
  node->value = sorted_mean(std::move(targets));

  if (depth >= ctx.params.max_depth ||
      static_cast<int>(rows.size()) < ctx.params.min_samples_split)
    return node;

  std::vector<int> candidates = ctx.sampler ? ctx.sampler(node_id) : ctx.all_features;
  auto split = best_split(ctx.data.x, ctx.data.y, rows, candidates, ctx.params.min_samples_leaf);
  if (!split) return node;

  std::vector<int> left_rows, right_rows;
  left_rows.reserve(rows.size());
  right_rows.reserve(rows.size());
  for (int r : rows) {
    if (ctx.data.x(r, split->feature_index) <= split->threshold)
      left_rows.push_back(r);
    else
      right_rows.push_back(r);
  }

  node->feature_index = split->feature_index;
  node->threshold = split->threshold;
  node->left = build_node(ctx, left_rows, depth + 1);
  node->right = build_node(ctx, right_rows, depth + 1);
  return node;
}

}  // namespace

std::unique_ptr<TreeNode> fit_tree(const DesignMatrix& train, const TreeParams& params,
                                   const FeatureSampler& sampler,
                                   const std::vector<int>* row_indices) {
  params.validate();
  if (train.n() < 1) throw std::invalid_argument("empty training set");

  std::vector<int> rows;
  if (row_indices) {
    rows = *row_indices;
    if (rows.empty()) throw std::invalid_argument("empty training set");
  } else {
    rows.resize(static_cast<std::size_t>(train.n()));
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
  }

  FitContext ctx{train, params, sampler, {}, 0};
  ctx.all_features.resize(static_cast<std::size_t>(train.p()));
  for (std::size_t j = 0; j < ctx.all_features.size(); ++j) ctx.all_features[j] = static_cast<int>(j);
  return build_node(ctx, rows, 0);
}

double predict_tree(const TreeNode& tree, const Eigen::Ref<const Vector>& row) {
  const TreeNode* node = &tree;
  while (!node->is_leaf()) {
    if (node->feature_index >= row.size())
      throw std::invalid_argument("row too short for tree: needs feature index " +
                                  std::to_string(node->feature_index));
    node = row(node->feature_index) <= node->threshold ? node->left.get() : node->right.get();
  }
  return node->value;
}

json tree_to_json(const TreeNode& tree) {
  if (tree.is_leaf()) return json{{"value", tree.value}, {"count", tree.count}};
  return json{{"feature_index", tree.feature_index},
              {"threshold", tree.threshold},
              {"left", tree_to_json(*tree.left)},
              {"right", tree_to_json(*tree.right)}};
}

std::unique_ptr<TreeNode> tree_from_json(const json& j) {
  auto node = std::make_unique<TreeNode>();
  if (j.contains("value")) {
    node->value = j.at("value").get<double>();
    node->count = j.at("count").get<int>();
  } else {
    node->feature_index = j.at("feature_index").get<int>();
    node->threshold = j.at("threshold").get<double>();
    node->left = tree_from_json(j.at("left"));
    node->right = tree_from_json(j.at("right"));
  }
  return node;
}

}  // namespace lanehouse
