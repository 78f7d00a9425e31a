#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lanehouse/numerics.hpp"
#include "support/fixtures.hpp"

using namespace lanehouse;

namespace {

// Gradient-descent oracle for 0.5*||y - Xb||^2 (+ 0.5*lambda*||b||^2).
// Started at zero it converges to the minimum-norm least-squares point,
// which is exactly what solve_least_squares promises.
Vector gd_oracle(const Matrix& x, const Vector& y, double lambda, int iters) {
  Vector b = Vector::Zero(x.cols());
  // Frobenius norm bounds the spectral norm, good enough for a step size.
  double lip = (x.transpose() * x).norm() + lambda;
  double step = 1.0 / lip;
  for (int i = 0; i < iters; ++i) {
    Vector grad = x.transpose() * (x * b - y) + lambda * b;
    b -= step * grad;
  }
  return b;
}

}  // namespace

TEST_CASE("least squares on an exactly solvable system") {
  Matrix x(3, 2);
  x << 1, 0, 0, 1, 1, 1;
  Vector y(3);
  y << 2, 3, 5;  // consistent with b = (2, 3)
  Vector b = solve_least_squares(x, y);
  CHECK(b(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b(1) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("least squares handles a duplicated column via the minimum-norm rule") {
  DesignMatrix d = testing::random_design(60, 3, 7);
  Matrix x(60, 4);
  x.leftCols(3) = d.x;
  x.col(3) = d.x.col(0);  // exact collinearity
  Vector b = solve_least_squares(x, d.y);
  Vector oracle = gd_oracle(x, d.y, 0.0, 200000);
  CHECK((b - oracle).cwiseAbs().maxCoeff() <= 1e-5);
  // Minimum norm splits the shared coefficient evenly across the twins.
  CHECK(b(0) == doctest::Approx(b(3)).epsilon(1e-8));
}

TEST_CASE("least squares residual is orthogonal to the column space") {
  DesignMatrix d = testing::random_design(80, 6, 11);
  Vector b = solve_least_squares(d.x, d.y);
  Vector grad = d.x.transpose() * (d.y - d.x * b);
  double bound = 1e-8 * (1.0 + (d.x.transpose() * d.y).cwiseAbs().maxCoeff());
  CHECK(grad.cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("ridge matches the one-dimensional closed form") {
  Matrix x(3, 1);
  x << 1, 2, 3;
  Vector y(3);
  y << 1, 2, 3;
  // b = x'y / (x'x + lambda) = 14 / (14 + 2.8) = 5/6.
  Vector b = solve_ridge(x, y, 2.8, /*penalize_intercept=*/true);
  CHECK(b(0) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("ridge with lambda 0 equals least squares") {
  DesignMatrix d = testing::random_design(50, 4, 3);
  Vector ls = solve_least_squares(d.x, d.y);
  Vector rr = solve_ridge(d.x, d.y, 0.0, true);
  CHECK((ls - rr).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("ridge coefficient norm shrinks monotonically in lambda") {
  DesignMatrix d = testing::random_design(50, 5, 17);
  double prev = solve_ridge(d.x, d.y, 0.0, true).norm();
  for (double lambda : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
    double cur = solve_ridge(d.x, d.y, lambda, true).norm();
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("ridge matches a gradient-descent oracle") {
  DesignMatrix d = testing::random_design(60, 4, 23);
  double lambda = 3.5;
  Vector b = solve_ridge(d.x, d.y, lambda, true);
  // Both routes solve (X'X + lambda I)b = X'y.
  Vector oracle = gd_oracle(d.x, d.y, lambda, 200000);
  CHECK((b - oracle).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("ridge leaves the intercept column unpenalized on request") {
  DesignMatrix d = testing::random_design(40, 2, 31);
  Matrix x(40, 3);
  x.leftCols(2) = d.x;
  x.col(2).setOnes();
  Vector b = solve_ridge(x, d.y, 1e12, /*penalize_intercept=*/false);
  CHECK(std::abs(b(0)) <= 1e-6);
  CHECK(std::abs(b(1)) <= 1e-6);
  CHECK(b(2) == doctest::Approx(d.y.mean()).epsilon(1e-6));
}

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(3.0, 1.0) == 2.0);
  CHECK(soft_threshold(-3.0, 1.0) == -2.0);
  CHECK(soft_threshold(0.5, 1.0) == 0.0);
  CHECK(soft_threshold(-0.5, 1.0) == 0.0);
  CHECK(soft_threshold(1.0, 1.0) == 0.0);  // boundary collapses to zero
  CHECK(soft_threshold(-1.0, 1.0) == 0.0);
  CHECK(soft_threshold(2.5, 0.0) == 2.5);  // gamma 0 is the identity
  CHECK(soft_threshold(0.0, 0.5) == 0.0);
}

TEST_CASE("soft threshold shrinks toward zero without crossing") {
  SplitMix64 rng = stream_rng(99, {1});
  for (int i = 0; i < 200; ++i) {
    double z = 20.0 * (rng.next_double() - 0.5);
    double g = 5.0 * rng.next_double();
    double s = soft_threshold(z, g);
    CHECK(std::abs(s) <= std::abs(z));
    CHECK(s * z >= 0.0);
    CHECK(std::abs(s) == doctest::Approx(std::max(std::abs(z) - g, 0.0)).epsilon(1e-12));
  }
}
