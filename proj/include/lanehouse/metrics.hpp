#pragma once

#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "lanehouse/types.hpp"

namespace lanehouse {

namespace detail {
// Pairwise sum over the sorted terms; permutation-invariant bit for bit.
double sorted_pairwise_sum(std::vector<double> terms);
}  // namespace detail

double mse(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& yhat);
double mae(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& yhat);

// 1 - SSE/SST; throws on constant y (undefined).
double r_squared(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& yhat);

struct MetricsReport {
  double mse = 0;
  double mae = 0;
  double r_squared = 0;
  long n = 0;
  Vector residuals;  // y_i - yhat_i

  nlohmann::json to_json() const;
};

MetricsReport evaluate_predictions(const Eigen::Ref<const Vector>& y,
                                   const Eigen::Ref<const Vector>& yhat);

}  // namespace lanehouse
