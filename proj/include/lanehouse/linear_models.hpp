#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lanehouse/types.hpp"

namespace lanehouse {

// Per-feature (mean, scale) applied at fit time; scales are > 0.
struct Standardization {
  Vector mean;
  Vector scale;
};

// Fitted linear regressor. Coefficients are stored in raw feature space,
// so prediction is intercept + x * coefficients regardless of whether the
// fit standardized internally.
struct LinearModel {
  double intercept = 0.0;
  Vector coefficients;
  std::vector<std::string> feature_names;
  std::optional<Standardization> standardization;
  bool converged = true;

  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);
};

struct FitConfig {
  double lambda = 0.0;
  double tolerance = 1e-10;
  int max_iterations = 10000;
  bool standardize = true;

  void validate() const;
};

// Per-sweep objective values of the lasso coordinate descent,
// 0.5*||r||^2 + lambda*||b||_1 in standardized space.
struct LassoDiagnostics {
  std::vector<double> objective_per_sweep;
  int sweeps = 0;
};

// Ordinary least squares with intercept (minimum-norm under collinearity).
LinearModel fit_mlr(const DesignMatrix& train);

// Squared-L2 penalty on the (optionally standardized) features; intercept
// never penalized.
LinearModel fit_ridge(const DesignMatrix& train, const FitConfig& cfg);

// Cyclic coordinate descent on 0.5*RSS + lambda*||b||_1 with the
// intercept excluded from the penalty. Non-convergence within
// max_iterations flags the model instead of failing.
LinearModel fit_lasso(const DesignMatrix& train, const FitConfig& cfg,
                      LassoDiagnostics* diagnostics = nullptr);

Vector predict_linear(const LinearModel& m, const Eigen::Ref<const Matrix>& x);

// Smallest lambda with an all-zero solution, max_j |z_j'(y - ybar)| over
// standardized columns.
double lasso_lambda_max(const DesignMatrix& train);

}  // namespace lanehouse
