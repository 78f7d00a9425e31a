#pragma once

#include <cmath>

#include "lanehouse/types.hpp"

namespace lanehouse {

// Minimum-norm least-squares solution via complete orthogonal
// decomposition; safe for rank-deficient inputs (full one-hot groups
// plus an intercept column are exactly collinear).
Vector solve_least_squares(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y);

// Solves (X'X + lambda*I')b = X'y. When penalize_intercept is false the
// last column is treated as the intercept and its diagonal entry of I'
// is zeroed. lambda == 0 falls back to the minimum-norm least-squares
// route.
Vector solve_ridge(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                   double lambda, bool penalize_intercept);

// Proximal kernel of the L1 penalty: sign(z) * max(|z| - gamma, 0).
template <typename Scalar>
Scalar soft_threshold(Scalar z, Scalar gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return Scalar(0);
}

}  // namespace lanehouse
