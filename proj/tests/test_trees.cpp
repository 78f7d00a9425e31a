#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <numeric>

#include "lanehouse/forest.hpp"
#include "lanehouse/rng.hpp"
#include "lanehouse/tree.hpp"
#include "support/fixtures.hpp"

using namespace lanehouse;

namespace {

double sse_of(const TreeNode& tree, const DesignMatrix& d) {
  double sse = 0;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    double e = d.y(i) - predict_tree(tree, d.x.row(i).transpose());
    sse += e * e;
  }
  return sse;
}

std::vector<int> iota_rows(int n) {
  std::vector<int> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

}  // namespace

TEST_CASE("best_split finds the obvious step") {
  Matrix x(4, 1);
  x << 1, 2, 3, 4;
  Vector y(4);
  y << 0, 0, 10, 10;
  auto split = best_split(x, y, iota_rows(4), {0}, 1);
  REQUIRE(split.has_value());
  CHECK(split->feature_index == 0);
  CHECK(split->threshold == 2.5);
  // Parent SSE 100, children 0: reduction is the whole 100.
  CHECK(split->sse_reduction == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("best_split declines constant targets and constant features") {
  Matrix x(4, 1);
  x << 1, 2, 3, 4;
  Vector flat = Vector::Constant(4, 5.0);
  CHECK_FALSE(best_split(x, flat, iota_rows(4), {0}, 1).has_value());

  Matrix same = Matrix::Constant(4, 1, 2.0);
  Vector y(4);
  y << 0, 0, 10, 10;
  CHECK_FALSE(best_split(same, y, iota_rows(4), {0}, 1).has_value());
}

TEST_CASE("best_split respects min_samples_leaf") {
  Matrix x(4, 1);
  x << 1, 2, 3, 4;
  Vector y(4);
  y << 0, 1, 2, 100;  // the greedy cut at 3.5 would strand one row
  auto split = best_split(x, y, iota_rows(4), {0}, 2);
  REQUIRE(split.has_value());
  CHECK(split->threshold == 2.5);
  CHECK_FALSE(best_split(x, y, iota_rows(4), {0}, 3).has_value());
}

TEST_CASE("best_split tie-break prefers the lower feature index") {
  Matrix x(4, 2);
  x << 1, 1, 2, 2, 3, 3, 4, 4;  // identical columns, identical gains
  Vector y(4);
  y << 0, 0, 10, 10;
  auto split = best_split(x, y, iota_rows(4), {1, 0}, 1);
  REQUIRE(split.has_value());
  CHECK(split->feature_index == 0);
}

TEST_CASE("fit_tree at depth one is a two-leaf stump") {
  Matrix x(4, 1);
  x << 1, 2, 3, 4;
  DesignMatrix d;
  d.x = x;
  d.y.resize(4);
  d.y << 0, 0, 10, 10;
  d.feature_names = {"f0"};
  TreeParams params{1, 1, 2};
  auto tree = fit_tree(d, params);
  REQUIRE_FALSE(tree->is_leaf());
  CHECK(tree->depth() == 1);
  CHECK(tree->left->is_leaf());
  CHECK(tree->right->is_leaf());
  CHECK(tree->left->value == 0.0);
  CHECK(tree->right->value == 10.0);
  CHECK(tree->left->count == 2);
  CHECK(tree->right->count == 2);
  CHECK(predict_tree(*tree, Vector::Constant(1, 2.5)) == 0.0);  // boundary goes left
  CHECK(predict_tree(*tree, Vector::Constant(1, 2.6)) == 10.0);
}

TEST_CASE("fit_tree structural invariants") {
  DesignMatrix d = testing::random_design(200, 5, 71, 1.0);
  TreeParams params{5, 7, 2};
  auto tree = fit_tree(d, params);
  CHECK(tree->depth() <= params.max_depth);

  // Every leaf holds at least min_samples_leaf rows and leaf counts
  // partition the training set.
  int total = 0;
  std::vector<const TreeNode*> stack{tree.get()};
  while (!stack.empty()) {
    const TreeNode* n = stack.back();
    stack.pop_back();
    if (n->is_leaf()) {
      CHECK(n->count >= params.min_samples_leaf);
      total += n->count;
    } else {
      stack.push_back(n->left.get());
      stack.push_back(n->right.get());
    }
  }
  CHECK(total == 200);
}

TEST_CASE("fit_tree is invariant to row permutation") {
  DesignMatrix d = testing::random_design(150, 4, 73, 1.0);
  TreeParams params{5, 7, 2};
  auto tree = fit_tree(d, params);

  std::vector<int> perm(150);
  std::iota(perm.begin(), perm.end(), 0);
  SplitMix64 rng = stream_rng(5, {0});
  shuffle(perm, rng);
  DesignMatrix shuffled = d.select_rows(perm);
  auto tree2 = fit_tree(shuffled, params);

  for (Eigen::Index i = 0; i < d.n(); ++i) {
    Vector row = d.x.row(i).transpose();
    CHECK(predict_tree(*tree, row) == predict_tree(*tree2, row));
  }
}

TEST_CASE("deeper trees never increase training SSE") {
  DesignMatrix d = testing::random_design(200, 4, 79, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (int depth = 1; depth <= 8; ++depth) {
    TreeParams params{depth, 1, 2};
    auto tree = fit_tree(d, params);
    double sse = sse_of(*tree, d);
    CHECK(sse <= prev + 1e-9 * (1.0 + prev));
    prev = sse;
  }
}

TEST_CASE("tree json round trip preserves predictions bitwise") {
  DesignMatrix d = testing::random_design(120, 4, 83, 1.0);
  TreeParams params{5, 7, 2};
  auto tree = fit_tree(d, params);
  auto back = tree_from_json(tree_to_json(*tree));
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    Vector row = d.x.row(i).transpose();
    CHECK(predict_tree(*tree, row) == predict_tree(*back, row));
  }
}

TEST_CASE("tree params validation") {
  CHECK_THROWS_AS((TreeParams{0, 1, 2}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((TreeParams{1, 0, 2}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((TreeParams{1, 1, 1}).validate(), std::invalid_argument);
}

TEST_CASE("forest with identity bootstrap and full features equals one tree") {
  DesignMatrix d = testing::random_design(100, 4, 89, 1.0);
  ForestParams fp;
  fp.tree = TreeParams{5, 7, 2};
  fp.n_estimators = 3;
  fp.feature_fraction = 1.0;  // every feature at every node
  fp.seed = 42;
  BootstrapSampler identity = [](int, int n) {
    std::vector<int> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
  };
  Forest forest = fit_forest(d, fp, identity);
  auto single = fit_tree(d, fp.tree);
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    Vector row = d.x.row(i).transpose();
    CHECK(predict_forest(forest, row) == doctest::Approx(predict_tree(*single, row)).epsilon(1e-12));
  }
  for (const auto& oob : forest.oob_indices) CHECK(oob.empty());
}

TEST_CASE("forest fits are seed-deterministic") {
  DesignMatrix d = testing::random_design(120, 6, 97, 1.0);
  ForestParams fp;
  fp.tree = TreeParams{10, 5, 10};
  fp.n_estimators = 20;
  fp.seed = 7;
  Forest a = fit_forest(d, fp);
  Forest b = fit_forest(d, fp);
  CHECK(testing::bit_equal(predict_forest_all(a, d.x), predict_forest_all(b, d.x)));
  CHECK(a.oob_indices == b.oob_indices);

  fp.seed = 8;
  Forest c = fit_forest(d, fp);
  CHECK_FALSE(testing::bit_equal(predict_forest_all(a, d.x), predict_forest_all(c, d.x)));
}

TEST_CASE("forest prediction is the mean of its trees and stays in range") {
  DesignMatrix d = testing::random_design(100, 5, 101, 1.0);
  ForestParams fp;
  fp.tree = TreeParams{10, 5, 10};
  fp.n_estimators = 15;
  fp.seed = 3;
  Forest forest = fit_forest(d, fp);
  double ymin = d.y.minCoeff(), ymax = d.y.maxCoeff();
  for (Eigen::Index i = 0; i < 20; ++i) {
    Vector row = d.x.row(i).transpose();
    double sum = 0;
    for (const auto& t : forest.trees) sum += predict_tree(*t, row);
    double p = predict_forest(forest, row);
    CHECK(p == sum / static_cast<double>(forest.trees.size()));
    CHECK(p >= ymin);
    CHECK(p <= ymax);
  }
}

TEST_CASE("forest oob indices are exactly the out-of-bag rows") {
  DesignMatrix d = testing::random_design(60, 3, 103, 1.0);
  ForestParams fp;
  fp.tree = TreeParams{4, 2, 4};
  fp.n_estimators = 10;
  fp.seed = 11;
  std::vector<std::vector<int>> bags;
  BootstrapSampler recorder = [&](int b, int n) {
    SplitMix64 rng = stream_rng(fp.seed, {static_cast<std::uint64_t>(b)});
    std::vector<int> rows(static_cast<std::size_t>(n));
    for (auto& r : rows) r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    bags.push_back(rows);
    return rows;
  };
  Forest forest = fit_forest(d, fp, recorder);
  REQUIRE(bags.size() == forest.oob_indices.size());
  for (std::size_t b = 0; b < bags.size(); ++b) {
    std::vector<bool> in_bag(60, false);
    for (int r : bags[b]) in_bag[static_cast<std::size_t>(r)] = true;
    std::vector<int> expected;
    for (int i = 0; i < 60; ++i)
      if (!in_bag[static_cast<std::size_t>(i)]) expected.push_back(i);
    CHECK(forest.oob_indices[b] == expected);
    CHECK_FALSE(expected.empty());  // with-replacement bags almost surely miss rows
  }
}

TEST_CASE("forest json round trip preserves predictions bitwise") {
  DesignMatrix d = testing::random_design(80, 4, 107, 1.0);
  ForestParams fp;
  fp.tree = TreeParams{6, 3, 6};
  fp.n_estimators = 8;
  fp.seed = 19;
  Forest forest = fit_forest(d, fp);
  Forest back = Forest::from_json(forest.to_json());
  CHECK(testing::bit_equal(predict_forest_all(forest, d.x), predict_forest_all(back, d.x)));
  CHECK(back.params.n_estimators == 8);
}

TEST_CASE("forest params validation") {
  ForestParams fp;
  fp.n_estimators = 0;
  CHECK_THROWS_AS(fp.validate(), std::invalid_argument);
  fp = ForestParams{};
  fp.feature_fraction = 0.0;
  CHECK_THROWS_AS(fp.validate(), std::invalid_argument);
  fp.feature_fraction = 1.5;
  CHECK_THROWS_AS(fp.validate(), std::invalid_argument);
}
