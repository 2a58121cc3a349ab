#include "emissionscope/forest.hpp"

#include <numeric>

#include "emissionscope/error.hpp"
#include "emissionscope/parallel.hpp"
#include "emissionscope/rng.hpp"

namespace emissionscope {

void ForestConfig::validate(std::size_t feature_count) const {
  tree.validate();
  if (n_trees < 1) throw Error(Errc::InvalidConfig, "forest needs at least one tree");
  if (mtry && (*mtry < 1 || *mtry > feature_count)) {
    throw Error(Errc::InvalidConfig, "mtry must lie in [1, " + std::to_string(feature_count) + "]");
  }
}

std::string ForestConfig::describe() const { return std::to_string(n_trees); }

ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const ForestConfig& cfg, std::size_t threads) {
  if (X.rows() == 0 || X.cols() == 0) {
    throw Error(Errc::EmptyDataset, "forest needs at least one row and one feature");
  }
  if (y.size() != X.rows()) throw Error(Errc::DimensionMismatch, "target length differs");
  const auto p = static_cast<std::size_t>(X.cols());
  cfg.validate(p);
  const auto n = static_cast<std::size_t>(X.rows());
  const std::size_t mtry = cfg.mtry.value_or(p);

  ForestModel model;
  model.config = cfg;
  model.trees.resize(cfg.n_trees);
  parallel_for(cfg.n_trees, threads == 0 ? default_thread_count() : threads, [&](std::size_t i) {
    Rng rng(child_seed(cfg.seed, i));
    std::vector<std::size_t> rows(n);
    if (cfg.bootstrap) {
      for (std::size_t& r : rows) r = rng.index(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    TreeConfig tree_cfg = cfg.tree;
    tree_cfg.seed = child_seed(cfg.seed, i);
    model.trees[i] = fit_tree(X, y, rows, tree_cfg, mtry, &rng);
  });
  return model;
}

Eigen::VectorXd predict_forest_prefix(const ForestModel& model, const Eigen::MatrixXd& X,
                                      std::size_t n_trees) {
  if (n_trees < 1 || n_trees > model.trees.size()) {
    throw Error(Errc::InvalidConfig, "prefix of " + std::to_string(n_trees) + " trees out of " +
                                         std::to_string(model.trees.size()));
  }
  // Deviations from the first tree are averaged so that identical members
  // reproduce the single-tree prediction exactly.
  const Eigen::VectorXd anchor = predict_tree(model.trees.front(), X);
  Eigen::VectorXd deviation = Eigen::VectorXd::Zero(X.rows());
  for (std::size_t t = 1; t < n_trees; ++t) {
    deviation += predict_tree(model.trees[t], X) - anchor;
  }
  return anchor + deviation / static_cast<double>(n_trees);
}

Eigen::VectorXd predict_forest(const ForestModel& model, const Eigen::MatrixXd& X) {
  if (model.trees.empty()) throw Error(Errc::InvalidConfig, "forest has no trees");
  return predict_forest_prefix(model, X, model.trees.size());
}

}  // namespace emissionscope
