#include "emissionscope/mlp.hpp"

#include <cmath>
#include <sstream>

#include "emissionscope/error.hpp"
#include "emissionscope/rng.hpp"

namespace emissionscope {

void MlpConfig::validate() const {
  for (std::size_t units : hidden_layers) {
    if (units < 1) throw Error(Errc::InvalidConfig, "hidden layer sizes must be at least 1");
  }
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw Error(Errc::InvalidConfig, "learning rate must be finite and non-negative");
  }
}

std::string MlpConfig::describe() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < hidden_layers.size(); ++i) os << (i ? " " : "") << hidden_layers[i];
  os << ']';
  return os.str();
}

std::size_t MlpModel::parameter_count() const {
  std::size_t count = 0;
  for (const DenseLayer& layer : layers) {
    count += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
  }
  return count;
}

Eigen::MatrixXd MlpModel::scale_inputs(const Eigen::MatrixXd& X) const {
  if (static_cast<std::size_t>(X.cols()) != input_dim()) {
    throw Error(Errc::DimensionMismatch, "network expects " + std::to_string(input_dim()) +
                                             " inputs, got " + std::to_string(X.cols()));
  }
  if (!config.normalize_inputs) return X;
  Eigen::MatrixXd out(X.rows(), X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double range = input_max(c) - input_min(c);
    if (range > 0.0) {
      out.col(c) = (X.col(c).array() - input_min(c)) / range;
    } else {
      out.col(c).setZero();
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

Eigen::MatrixXd affine(const Eigen::MatrixXd& input, const DenseLayer& layer) {
  Eigen::MatrixXd z = input * layer.weights.transpose();
  z.rowwise() += layer.bias.transpose();
  return z;
}

// Activations per layer: [scaled input, hidden..., output].
std::vector<Eigen::MatrixXd> forward(const MlpModel& model, const Eigen::MatrixXd& X) {
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(model.layers.size() + 1);
  acts.push_back(model.scale_inputs(X));
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    Eigen::MatrixXd z = affine(acts.back(), model.layers[l]);
    const bool output = l + 1 == model.layers.size();
    acts.push_back(output ? std::move(z) : sigmoid(z));
  }
  return acts;
}

void check_batch(const MlpModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() == 0) throw Error(Errc::EmptyDataset, "batch has no rows");
  if (y.size() != X.rows()) {
    throw Error(Errc::DimensionMismatch, "target length differs from batch rows");
  }
  if (static_cast<std::size_t>(X.cols()) != model.input_dim()) {
    throw Error(Errc::DimensionMismatch, "network expects " + std::to_string(model.input_dim()) +
                                             " inputs, got " + std::to_string(X.cols()));
  }
}

MlpGradient backprop(const MlpModel& model, const std::vector<Eigen::MatrixXd>& acts,
                     const Eigen::VectorXd& y) {
  const auto n = static_cast<double>(y.size());
  const Eigen::VectorXd residual = acts.back().col(0) - y;
  MlpGradient grad;
  grad.loss = residual.squaredNorm() / n;
  grad.layers.resize(model.layers.size());

  Eigen::MatrixXd delta = (2.0 / n) * residual;  // dLoss/dz at the output, n x 1
  for (std::size_t l = model.layers.size(); l-- > 0;) {
    grad.layers[l].weights = delta.transpose() * acts[l];
    grad.layers[l].bias = delta.colwise().sum().transpose();
    if (l == 0) break;
    const Eigen::MatrixXd& a = acts[l];
    delta = ((delta * model.layers[l].weights).array() * a.array() * (1.0 - a.array())).matrix();
  }
  return grad;
}

}  // namespace

MlpModel initialize_mlp(const Eigen::MatrixXd& X, const MlpConfig& cfg) {
  cfg.validate();
  if (X.cols() < 1) throw Error(Errc::DimensionMismatch, "network needs at least one input");
  MlpModel model;
  model.config = cfg;
  if (X.rows() > 0) {
    model.input_min = X.colwise().minCoeff().transpose();
    model.input_max = X.colwise().maxCoeff().transpose();
  } else {
    model.input_min = Eigen::VectorXd::Zero(X.cols());
    model.input_max = Eigen::VectorXd::Zero(X.cols());
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> widths{static_cast<std::size_t>(X.cols())};
  widths.insert(widths.end(), cfg.hidden_layers.begin(), cfg.hidden_layers.end());
  widths.push_back(1);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(widths[l]);
    const auto fan_out = static_cast<Eigen::Index>(widths[l + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    DenseLayer layer;
    layer.weights.resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < fan_out; ++r) {
      for (Eigen::Index c = 0; c < fan_in; ++c) layer.weights(r, c) = rng.uniform(-limit, limit);
    }
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

MlpGradient mlp_gradient(const MlpModel& model, const Eigen::MatrixXd& X,
                         const Eigen::VectorXd& y) {
  check_batch(model, X, y);
  return backprop(model, forward(model, X), y);
}

double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  check_batch(model, X, y);
  return (forward(model, X).back().col(0) - y).squaredNorm() / static_cast<double>(y.size());
}

MlpModel fit_mlp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const MlpConfig& cfg) {
  if (X.rows() == 0) throw Error(Errc::EmptyDataset, "cannot train on an empty dataset");
  MlpModel model = initialize_mlp(X, cfg);
  check_batch(model, X, y);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const MlpGradient grad = mlp_gradient(model, X, y);
    if (!std::isfinite(grad.loss)) {
      throw Error(Errc::NonFiniteLoss, "loss diverged at epoch " + std::to_string(epoch));
    }
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
      model.layers[l].weights -= cfg.learning_rate * grad.layers[l].weights;
      model.layers[l].bias -= cfg.learning_rate * grad.layers[l].bias;
    }
  }
  if (cfg.epochs > 0 && !std::isfinite(mlp_loss(model, X, y))) {
    throw Error(Errc::NonFiniteLoss, "loss diverged at epoch " + std::to_string(cfg.epochs));
  }
  return model;
}

Eigen::VectorXd predict_mlp(const MlpModel& model, const Eigen::MatrixXd& X) {
  return forward(model, X).back().col(0);
}

}  // namespace emissionscope
