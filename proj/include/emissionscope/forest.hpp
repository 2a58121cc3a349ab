#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emissionscope/tree.hpp"

namespace emissionscope {

struct ForestConfig {
  std::size_t n_trees = 100;
  TreeConfig tree;
  bool bootstrap = true;
  /// Features tried per split; unset means all of them.
  std::optional<std::size_t> mtry;
  std::uint64_t seed = 0;

  void validate(std::size_t feature_count) const;
  /// Tree count as text, e.g. "150".
  std::string describe() const;
};

struct ForestModel {
  ForestConfig config;
  std::vector<TreeModel> trees;
};

/// Tree i draws its bootstrap sample and split features from the stream
/// child_seed(config.seed, i), so the result does not depend on `threads`.
/// threads == 0 uses default_thread_count().
ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const ForestConfig& cfg, std::size_t threads = 0);

/// Mean of the member predictions, accumulated in tree order.
Eigen::VectorXd predict_forest(const ForestModel& model, const Eigen::MatrixXd& X);

/// Prediction of the forest made of the first `n_trees` members; equals the
/// forest fitted with that tree count under the same master seed.
Eigen::VectorXd predict_forest_prefix(const ForestModel& model, const Eigen::MatrixXd& X,
                                      std::size_t n_trees);

}  // namespace emissionscope
