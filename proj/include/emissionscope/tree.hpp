#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace emissionscope {

class Rng;

struct TreeConfig {
  /// Global budget of split nodes; unset means n_train - 1.
  std::optional<std::size_t> max_splits;
  std::size_t min_leaf_size = 1;
  std::size_t min_parent_size = 10;
  std::uint64_t seed = 0;

  void validate() const;
  /// "[min_leaf min_parent]"
  std::string describe() const;
};

/// Nodes are stored in preorder; the root is nodes[0] and a split node's left
/// child immediately follows it.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::size_t right = 0;
  double value = 0.0;       // mean training target reaching the node
  std::size_t count = 0;    // training rows reaching the node

  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  TreeConfig config;  // max_splits resolved
  std::size_t input_dim = 0;
  std::vector<TreeNode> nodes;

  std::size_t split_count() const;
  std::size_t leaf_count() const;
  /// Rows with x[feature] < threshold go left, all others right.
  std::size_t leaf_for(const Eigen::MatrixXd& X, Eigen::Index row) const;
};

/// Winner of a split search at one node.
struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;
  double child_sse = 0.0;
  std::size_t left_count = 0;
};

/// Best SSE split over the given rows and features. Thresholds are midpoints
/// between consecutive distinct values; both children must hold at least
/// min_leaf rows. SSE ties (within 1e-9 of the parent SSE) go to the lower
/// feature index, then the lower threshold.
std::optional<SplitChoice> best_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                      std::span<const std::size_t> rows,
                                      std::span<const std::size_t> features,
                                      std::size_t min_leaf);

/// Relative tolerance under which two candidate SSE values count as tied.
inline constexpr double kSplitTieTolerance = 1e-9;

TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TreeConfig& cfg);

/// Fits on the listed rows (repeats allowed, as in a bootstrap sample). When
/// mtry is below the column count each split considers mtry features drawn
/// from `rng`.
TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   std::span<const std::size_t> rows, const TreeConfig& cfg, std::size_t mtry,
                   Rng* rng);

Eigen::VectorXd predict_tree(const TreeModel& model, const Eigen::MatrixXd& X);

}  // namespace emissionscope
