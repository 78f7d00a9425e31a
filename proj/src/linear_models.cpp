#include "lanehouse/linear_models.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "lanehouse/numerics.hpp"

namespace lanehouse {

using nlohmann::json;

void FitConfig::validate() const {
  if (lambda < 0) throw std::invalid_argument("lambda must be non-negative");
  if (tolerance <= 0) throw std::invalid_argument("tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

namespace {

Standardization compute_standardization(const Matrix& x) {
  Standardization s;
  const Eigen::Index n = x.rows(), p = x.cols();
  s.mean = x.colwise().mean();
  s.scale.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double var = (x.col(j).array() - s.mean(j)).square().sum() / static_cast<double>(n);
    double sd = std::sqrt(var);
    s.scale(j) = sd > 0 ? sd : 1.0;  // constant columns keep scale 1
  }
  return s;
}

Matrix standardized(const Matrix& x, const Standardization& s) {
  return (x.rowwise() - s.mean.transpose()).array().rowwise() / s.scale.transpose().array();
}

Matrix with_ones_column(const Matrix& x) {
  Matrix w(x.rows(), x.cols() + 1);
  w.leftCols(x.cols()) = x;
  w.col(x.cols()).setOnes();
  return w;
}

// Maps standardized-space coefficients back to raw feature space.
void unstandardize_into(LinearModel& m, const Vector& beta_std, double intercept_std,
                        const Standardization& s) {
  m.coefficients = beta_std.array() / s.scale.array();
  m.intercept = intercept_std - m.coefficients.dot(s.mean);
  m.standardization = s;
}

void check_train(const DesignMatrix& train, Eigen::Index min_rows) {
  if (train.n() < min_rows)
    throw std::invalid_argument("training set needs at least " + std::to_string(min_rows) + " rows");
  if (train.p() < 1) throw std::invalid_argument("training set has no features");
}

}  // namespace

LinearModel fit_mlr(const DesignMatrix& train) {
  check_train(train, 2);
  Vector beta = solve_least_squares(with_ones_column(train.x), train.y);
  LinearModel m;
  m.feature_names = train.feature_names;
  m.coefficients = beta.head(train.p());
  m.intercept = beta(train.p());
  return m;
}

LinearModel fit_ridge(const DesignMatrix& train, const FitConfig& cfg) {
  check_train(train, 1);
  cfg.validate();
  LinearModel m;
  m.feature_names = train.feature_names;
  if (cfg.standardize) {
    Standardization s = compute_standardization(train.x);
    Vector beta = solve_ridge(with_ones_column(standardized(train.x, s)), train.y, cfg.lambda,
                              /*penalize_intercept=*/false);
    unstandardize_into(m, beta.head(train.p()), beta(train.p()), s);
  } else {
    Vector beta = solve_ridge(with_ones_column(train.x), train.y, cfg.lambda,
                              /*penalize_intercept=*/false);
    m.coefficients = beta.head(train.p());
    m.intercept = beta(train.p());
  }
  return m;
}

LinearModel fit_lasso(const DesignMatrix& train, const FitConfig& cfg,
                      LassoDiagnostics* diagnostics) {
  check_train(train, 1);
  cfg.validate();
  const Eigen::Index p = train.p();

  std::optional<Standardization> s;
  Matrix w;
  if (cfg.standardize) {
    s = compute_standardization(train.x);
    w = standardized(train.x, *s);
  } else {
    w = train.x;
  }

  Vector col_sq(p);
  for (Eigen::Index j = 0; j < p; ++j) col_sq(j) = w.col(j).squaredNorm();

  Vector beta = Vector::Zero(p);
  double intercept = 0.0;
  Vector residual = train.y;
  bool converged = false;
  int sweep = 0;

  for (; sweep < cfg.max_iterations; ++sweep) {
    double max_change = 0.0;

    // Unpenalized intercept coordinate.
    double shift = residual.mean();
    intercept += shift;
    residual.array() -= shift;
    max_change = std::abs(shift);

    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_sq(j) == 0) continue;  // constant column, coefficient stays 0
      double rho = w.col(j).dot(residual) + col_sq(j) * beta(j);
      double updated = soft_threshold(rho, cfg.lambda) / col_sq(j);
      double delta = updated - beta(j);
      if (delta != 0) {
        residual -= delta * w.col(j);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }

    if (diagnostics)
      diagnostics->objective_per_sweep.push_back(0.5 * residual.squaredNorm() +
                                                 cfg.lambda * beta.lpNorm<1>());
    if (max_change < cfg.tolerance) {
      converged = true;
      ++sweep;
      break;
    }
  }
  if (diagnostics) diagnostics->sweeps = sweep;

  LinearModel m;
  m.feature_names = train.feature_names;
  m.converged = converged;
  if (s) {
    unstandardize_into(m, beta, intercept, *s);
  } else {
    m.coefficients = beta;
    m.intercept = intercept;
  }
  return m;
}

Vector predict_linear(const LinearModel& m, const Eigen::Ref<const Matrix>& x) {
  if (x.cols() != m.coefficients.size())
    throw std::invalid_argument("width mismatch: model has " + std::to_string(m.coefficients.size()) +
                                " features, input has " + std::to_string(x.cols()));
  return (x * m.coefficients).array() + m.intercept;
}

double lasso_lambda_max(const DesignMatrix& train) {
  Standardization s = compute_standardization(train.x);
  Matrix z = standardized(train.x, s);
  Vector centered = train.y.array() - train.y.mean();
  return (z.transpose() * centered).cwiseAbs().maxCoeff();
}

json LinearModel::to_json() const {
  json j;
  j["format_version"] = 1;
  j["kind"] = "linear";
  j["intercept"] = intercept;
  j["coefficients"] = std::vector<double>(coefficients.begin(), coefficients.end());
  j["feature_names"] = feature_names;
  j["converged"] = converged;
  if (standardization) {
    j["standardization"] = {
        {"mean", std::vector<double>(standardization->mean.begin(), standardization->mean.end())},
        {"scale", std::vector<double>(standardization->scale.begin(), standardization->scale.end())}};
  }
  return j;
}

LinearModel LinearModel::from_json(const json& j) {
  if (j.at("format_version").get<int>() != 1)
    throw std::runtime_error("unsupported linear model format version");
  LinearModel m;
  m.intercept = j.at("intercept").get<double>();
  auto coefs = j.at("coefficients").get<std::vector<double>>();
  m.coefficients = Eigen::Map<const Vector>(coefs.data(), static_cast<Eigen::Index>(coefs.size()));
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.converged = j.at("converged").get<bool>();
  if (j.contains("standardization")) {
    auto mean = j["standardization"].at("mean").get<std::vector<double>>();
    auto scale = j["standardization"].at("scale").get<std::vector<double>>();
    Standardization s;
    s.mean = Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    s.scale = Eigen::Map<const Vector>(scale.data(), static_cast<Eigen::Index>(scale.size()));
    m.standardization = s;
  }
  return m;
}

}  // namespace lanehouse
