#include "emissionscope/linear.hpp"

#include <Eigen/QR>
#include <string>

#include "emissionscope/error.hpp"

namespace emissionscope {

LinearModel fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() < 2 || X.cols() < 1) {
    throw Error(Errc::DegenerateDesign, "linear fit needs at least 2 rows and 1 column, got " +
                                            std::to_string(X.rows()) + "x" +
                                            std::to_string(X.cols()));
  }
  if (y.size() != X.rows()) {
    throw Error(Errc::DimensionMismatch, "target length differs from row count");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw Error(Errc::NonFiniteInput, "linear fit input has non-finite values");
  }
  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd centered = X.rowwise() - x_mean;
  const Eigen::VectorXd y_centered = y.array() - y_mean;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(centered);
  LinearModel model;
  model.weights = cod.solve(y_centered);
  model.intercept = y_mean - x_mean.dot(model.weights);
  return model;
}

Eigen::VectorXd predict_linear(const LinearModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.weights.size()) {
    throw Error(Errc::DimensionMismatch, "model expects " + std::to_string(model.weights.size()) +
                                             " features, got " + std::to_string(X.cols()));
  }
  Eigen::VectorXd out = X * model.weights;
  out.array() += model.intercept;
  return out;
}

}  // namespace emissionscope
