#include "lanehouse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace lanehouse {

namespace detail {

namespace {
double pairwise(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise(data, half) + pairwise(data + half, n - half);
}
}  // namespace

double sorted_pairwise_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  return pairwise(terms.data(), terms.size());
}

}  // namespace detail

namespace {
void check_pair(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& yhat,
                Eigen::Index min_len) {
  if (y.size() != yhat.size())
    throw std::invalid_argument("length mismatch: " + std::to_string(y.size()) + " vs " +
                                std::to_string(yhat.size()));
  if (y.size() < min_len) throw std::invalid_argument("too few observations");
}

std::vector<double> squared_residuals(const Eigen::Ref<const Vector>& y,
                                      const Eigen::Ref<const Vector>& yhat) {
  std::vector<double> t(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    double r = y(i) - yhat(i);
    t[static_cast<std::size_t>(i)] = r * r;
  }
  return t;
}
}  // namespace

double mse(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& yhat) {
  check_pair(y, yhat, 1);
  return detail::sorted_pairwise_sum(squared_residuals(y, yhat)) / static_cast<double>(y.size());
}

double mae(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& yhat) {
  check_pair(y, yhat, 1);
  std::vector<double> t(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i)
    t[static_cast<std::size_t>(i)] = std::abs(y(i) - yhat(i));
  return detail::sorted_pairwise_sum(std::move(t)) / static_cast<double>(y.size());
}

double r_squared(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& yhat) {
  check_pair(y, yhat, 2);
  double ybar = y.mean();
  std::vector<double> tot(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    double d = y(i) - ybar;
    tot[static_cast<std::size_t>(i)] = d * d;
  }
  double sst = detail::sorted_pairwise_sum(std::move(tot));
  if (sst == 0) throw std::domain_error("undefined R^2 (zero variance)");
  double sse = detail::sorted_pairwise_sum(squared_residuals(y, yhat));
  return 1.0 - sse / sst;
}

MetricsReport evaluate_predictions(const Eigen::Ref<const Vector>& y,
                                   const Eigen::Ref<const Vector>& yhat) {
  check_pair(y, yhat, 2);
  MetricsReport r;
  r.n = static_cast<long>(y.size());
  r.residuals = y - yhat;
  r.mse = mse(y, yhat);
  r.mae = mae(y, yhat);
  r.r_squared = r_squared(y, yhat);
  return r;
}

nlohmann::json MetricsReport::to_json() const {
  return nlohmann::json{{"mse", mse}, {"mae", mae}, {"r_squared", r_squared}, {"n", n}};
}

}  // namespace lanehouse
