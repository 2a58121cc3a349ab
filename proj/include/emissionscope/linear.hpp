#pragma once

#include <Eigen/Core>

namespace emissionscope {

struct LinearModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
};

/// Ordinary least squares with intercept. Columns are centered and solved by
/// complete orthogonal decomposition; rank-deficient designs get the
/// minimum-norm weight vector.
LinearModel fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

Eigen::VectorXd predict_linear(const LinearModel& model, const Eigen::MatrixXd& X);

}  // namespace emissionscope
