#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace emissionscope {

struct MlpConfig {
  std::vector<std::size_t> hidden_layers{100, 90, 80};
  double learning_rate = 0.01;
  std::size_t epochs = 1000;
  std::uint64_t seed = 0;
  bool normalize_inputs = true;

  void validate() const;
  /// Layer architecture in bracket form, e.g. "[100 90 80]".
  std::string describe() const;
};

struct DenseLayer {
  Eigen::MatrixXd weights;  // outputs x inputs
  Eigen::VectorXd bias;
};

/// Sigmoid hidden layers feeding one linear output node. Inputs are min-max
/// scaled with training statistics before the first layer.
struct MlpModel {
  MlpConfig config;
  std::vector<DenseLayer> layers;
  Eigen::VectorXd input_min;
  Eigen::VectorXd input_max;

  std::size_t input_dim() const { return static_cast<std::size_t>(input_min.size()); }
  std::size_t parameter_count() const;
  /// Applies the stored scaling (identity when normalization is off).
  Eigen::MatrixXd scale_inputs(const Eigen::MatrixXd& X) const;
};

/// Same layout as the model's layers, holding dLoss/dParameter.
struct MlpGradient {
  std::vector<DenseLayer> layers;
  double loss = 0.0;
};

/// Normalization from X plus seeded Glorot-uniform weights and zero biases.
MlpModel initialize_mlp(const Eigen::MatrixXd& X, const MlpConfig& cfg);

/// Full-batch gradient descent on mean squared error.
MlpModel fit_mlp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const MlpConfig& cfg);

/// Exact gradient of the batch mean squared error by backpropagation.
MlpGradient mlp_gradient(const MlpModel& model, const Eigen::MatrixXd& X,
                         const Eigen::VectorXd& y);

double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

Eigen::VectorXd predict_mlp(const MlpModel& model, const Eigen::MatrixXd& X);

}  // namespace emissionscope
