#include "lanehouse/regressors.hpp"

#include <set>
#include <stdexcept>

namespace lanehouse {

std::string to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::mlr: return "mlr";
    case ModelFamily::ridge: return "ridge";
    case ModelFamily::lasso: return "lasso";
    case ModelFamily::tree: return "tree";
    case ModelFamily::forest: return "forest";
  }
  throw std::logic_error("bad ModelFamily");
}

ModelFamily model_family_from_string(const std::string& s) {
  if (s == "mlr") return ModelFamily::mlr;
  if (s == "ridge") return ModelFamily::ridge;
  if (s == "lasso") return ModelFamily::lasso;
  if (s == "tree") return ModelFamily::tree;
  if (s == "forest") return ModelFamily::forest;
  throw std::invalid_argument("unknown model family: " + s);
}

Vector FittedModel::predict(const Eigen::Ref<const Matrix>& x) const {
  if (const auto* lin = std::get_if<LinearModel>(&model_)) return predict_linear(*lin, x);
  if (const auto* tree = std::get_if<std::shared_ptr<const TreeNode>>(&model_)) {
    Vector out(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      out(i) = predict_tree(**tree, x.row(i).transpose());
    return out;
  }
  return predict_forest_all(*std::get<std::shared_ptr<const Forest>>(model_), x);
}

namespace {

class ParamReader {
 public:
  explicit ParamReader(const ParamMap& params) : params_(params) {}

  double number(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }
  int integer(const std::string& key, int fallback) {
    return static_cast<int>(number(key, fallback));
  }
  bool flag(const std::string& key, bool fallback) {
    return number(key, fallback ? 1.0 : 0.0) != 0.0;
  }

  void reject_unknown(const std::string& family) const {
    for (const auto& [key, value] : params_) {
      (void)value;
      if (!used_.count(key))
        throw std::invalid_argument("unknown parameter '" + key + "' for family " + family);
    }
  }

 private:
  const ParamMap& params_;
  std::set<std::string> used_;
};

}  // namespace

FittedModel fit_model(ModelFamily family, const ParamMap& params, const DesignMatrix& train,
                      std::uint64_t default_seed) {
  ParamReader reader(params);
  switch (family) {
    case ModelFamily::mlr: {
      reader.reject_unknown("mlr");
      return FittedModel(fit_mlr(train));
    }
    case ModelFamily::ridge:
    case ModelFamily::lasso: {
      FitConfig cfg;
      cfg.lambda = reader.number("lambda", 0.0);
      cfg.tolerance = reader.number("tolerance", cfg.tolerance);
      cfg.max_iterations = reader.integer("max_iterations", cfg.max_iterations);
      cfg.standardize = reader.flag("standardize", true);
      reader.reject_unknown(to_string(family));
      return FittedModel(family == ModelFamily::ridge ? fit_ridge(train, cfg)
                                                      : fit_lasso(train, cfg));
    }
    case ModelFamily::tree: {
      TreeParams tp;
      tp.max_depth = reader.integer("max_depth", 5);
      tp.min_samples_leaf = reader.integer("min_samples_leaf", 7);
      tp.min_samples_split = reader.integer("min_samples_split", 2);
      reader.reject_unknown("tree");
      return FittedModel(std::shared_ptr<const TreeNode>(fit_tree(train, tp)));
    }
    case ModelFamily::forest: {
      ForestParams fp;
      fp.tree.max_depth = reader.integer("max_depth", 10);
      fp.tree.min_samples_leaf = reader.integer("min_samples_leaf", 5);
      fp.tree.min_samples_split = reader.integer("min_samples_split", 10);
      fp.n_estimators = reader.integer("n_estimators", 100);
      fp.feature_fraction = reader.number("feature_fraction", fp.feature_fraction);
      fp.seed = static_cast<std::uint64_t>(reader.number("seed", static_cast<double>(default_seed)));
      reader.reject_unknown("forest");
      return FittedModel(std::make_shared<const Forest>(fit_forest(train, fp)));
    }
  }
  throw std::logic_error("bad ModelFamily");
}

}  // namespace lanehouse
