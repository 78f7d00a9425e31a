#include "lanehouse/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <stdexcept>

namespace lanehouse {

namespace {
void check_inputs(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y) {
  if (x.rows() != y.size())
    throw std::invalid_argument("dimension mismatch: " + std::to_string(x.rows()) + " rows vs " +
                                std::to_string(y.size()) + " targets");
  if (x.rows() < 1 || x.cols() < 1) throw std::invalid_argument("empty system");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("non-finite input");
}
}  // namespace

Vector solve_least_squares(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y) {
  check_inputs(x, y);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(x);
  return cod.solve(y);
}

Vector solve_ridge(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                   double lambda, bool penalize_intercept) {
  check_inputs(x, y);
  if (lambda < 0) throw std::invalid_argument("lambda must be non-negative");
  if (lambda == 0) return solve_least_squares(x, y);

  Matrix gram = x.transpose() * x;
  const Eigen::Index p = x.cols();
  for (Eigen::Index j = 0; j < p; ++j) {
    bool exempt = !penalize_intercept && j == p - 1;
    if (!exempt) gram(j, j) += lambda;
  }
  return gram.ldlt().solve(x.transpose() * y);
}

}  // namespace lanehouse
