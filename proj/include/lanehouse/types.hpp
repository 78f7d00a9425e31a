#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace lanehouse {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Numeric feature matrix plus target vector, the common input to every
// regressor. Invariant: x and y are finite, rows(x) == size(y),
// cols(x) == size(feature_names).
struct DesignMatrix {
  Matrix x;
  Vector y;
  std::vector<std::string> feature_names;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }

  DesignMatrix select_rows(const std::vector<int>& idx) const {
    DesignMatrix out;
    out.feature_names = feature_names;
    out.x.resize(static_cast<Eigen::Index>(idx.size()), x.cols());
    out.y.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out.x.row(static_cast<Eigen::Index>(i)) = x.row(idx[i]);
      out.y(static_cast<Eigen::Index>(i)) = y(idx[i]);
    }
    return out;
  }
};

}  // namespace lanehouse
