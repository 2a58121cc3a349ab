#include "emissionscope/tree.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "emissionscope/error.hpp"
#include "emissionscope/rng.hpp"

namespace emissionscope {

void TreeConfig::validate() const {
  if (min_leaf_size < 1) throw Error(Errc::InvalidConfig, "min_leaf_size must be at least 1");
}

std::string TreeConfig::describe() const {
  std::ostringstream os;
  os << '[' << min_leaf_size << ' ' << min_parent_size << ']';
  return os.str();
}

std::size_t TreeModel::split_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
}

std::size_t TreeModel::leaf_count() const { return nodes.size() - split_count(); }

std::size_t TreeModel::leaf_for(const Eigen::MatrixXd& X, Eigen::Index row) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = X(row, n.feature) < n.threshold ? i + 1 : n.right;
  }
  return i;
}

namespace {

// Mean written as y0 + mean(y - y0) so constant inputs reproduce exactly.
double stable_mean(const Eigen::VectorXd& y, std::span<const std::size_t> rows) {
  const double anchor = y(static_cast<Eigen::Index>(rows.front()));
  double dev = 0.0;
  for (std::size_t r : rows) dev += y(static_cast<Eigen::Index>(r)) - anchor;
  return anchor + dev / static_cast<double>(rows.size());
}

double sse_about(const Eigen::VectorXd& y, std::span<const std::size_t> rows, double mean) {
  double sse = 0.0;
  for (std::size_t r : rows) {
    const double d = y(static_cast<Eigen::Index>(r)) - mean;
    sse += d * d;
  }
  return sse;
}

struct Candidate {
  std::size_t feature;
  double threshold;
  double sse;
  std::size_t left_count;
};

std::optional<SplitChoice> search(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  std::span<const std::size_t> rows,
                                  std::span<const std::size_t> features, std::size_t min_leaf,
                                  double mean, double parent_sse) {
  const std::size_t m = rows.size();
  if (m < 2 * min_leaf) return std::nullopt;
  std::vector<Candidate> candidates;
  std::vector<std::pair<double, double>> column(m);  // (x, y - mean)
  double total_q = 0.0;
  double total_s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = y(static_cast<Eigen::Index>(rows[i])) - mean;
    total_s += d;
    total_q += d * d;
  }
  for (std::size_t f : features) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto r = static_cast<Eigen::Index>(rows[i]);
      column[i] = {X(r, static_cast<Eigen::Index>(f)), y(r) - mean};
    }
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double s_left = 0.0;
    double q_left = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
      s_left += column[k].second;
      q_left += column[k].second * column[k].second;
      const double lo = column[k].first;
      const double hi = column[k + 1].first;
      if (!(lo < hi)) continue;
      const std::size_t n_left = k + 1;
      const std::size_t n_right = m - n_left;
      if (n_left < min_leaf || n_right < min_leaf) continue;
      const double s_right = total_s - s_left;
      const double sse_left = std::max(0.0, q_left - s_left * s_left / static_cast<double>(n_left));
      const double sse_right = std::max(
          0.0, (total_q - q_left) - s_right * s_right / static_cast<double>(n_right));
      double threshold = lo + 0.5 * (hi - lo);
      if (!(threshold > lo)) threshold = hi;
      candidates.push_back({f, threshold, sse_left + sse_right, n_left});
    }
  }
  if (candidates.empty()) return std::nullopt;
  double best = candidates.front().sse;
  for (const Candidate& c : candidates) best = std::min(best, c.sse);
  const double tol = kSplitTieTolerance * parent_sse;
  // Candidates were generated in (feature, threshold) order, so the first one
  // within tolerance of the minimum honors the tie-break rule.
  for (const Candidate& c : candidates) {
    if (c.sse <= best + tol) return SplitChoice{c.feature, c.threshold, c.sse, c.left_count};
  }
  return std::nullopt;
}

struct PendingNode {
  std::vector<std::size_t> rows;
  std::size_t id;
};

struct BuildNode {
  int feature = -1;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  double value = 0.0;
  std::size_t count = 0;
};

void to_preorder(const std::vector<BuildNode>& built, std::size_t id,
                 std::vector<TreeNode>& out) {
  const BuildNode& b = built[id];
  const std::size_t self = out.size();
  out.push_back({b.feature, b.threshold, 0, b.value, b.count});
  if (b.feature < 0) return;
  to_preorder(built, b.left, out);
  out[self].right = out.size();
  to_preorder(built, b.right, out);
}

}  // namespace

std::optional<SplitChoice> best_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                      std::span<const std::size_t> rows,
                                      std::span<const std::size_t> features,
                                      std::size_t min_leaf) {
  if (rows.empty()) return std::nullopt;
  const double mean = stable_mean(y, rows);
  return search(X, y, rows, features, std::max<std::size_t>(1, min_leaf), mean,
                sse_about(y, rows, mean));
}

TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TreeConfig& cfg) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(X.rows()));
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return fit_tree(X, y, rows, cfg, static_cast<std::size_t>(X.cols()), nullptr);
}

TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   std::span<const std::size_t> rows, const TreeConfig& cfg, std::size_t mtry,
                   Rng* rng) {
  cfg.validate();
  if (rows.empty() || X.cols() == 0) {
    throw Error(Errc::EmptyDataset, "tree needs at least one row and one feature");
  }
  if (y.size() != X.rows()) throw Error(Errc::DimensionMismatch, "target length differs");
  if (rows.size() < cfg.min_leaf_size) {
    throw Error(Errc::TooFewRows, std::to_string(rows.size()) + " rows cannot fill a leaf of " +
                                      std::to_string(cfg.min_leaf_size));
  }
  const auto p = static_cast<std::size_t>(X.cols());
  mtry = std::clamp<std::size_t>(mtry, 1, p);
  const bool subsample = mtry < p;
  if (subsample && rng == nullptr) {
    throw Error(Errc::InvalidConfig, "feature subsampling needs a random stream");
  }

  TreeModel model;
  model.config = cfg;
  model.config.max_splits = cfg.max_splits.value_or(rows.size() - 1);
  model.input_dim = p;
  const std::size_t budget = *model.config.max_splits;

  std::vector<std::size_t> all_features(p);
  std::iota(all_features.begin(), all_features.end(), std::size_t{0});
  std::vector<std::size_t> drawn;

  std::vector<BuildNode> built;
  std::deque<PendingNode> queue;
  built.push_back({});
  queue.push_back({std::vector<std::size_t>(rows.begin(), rows.end()), 0});
  std::size_t splits = 0;

  // Breadth-first so a finite split budget is spent level by level.
  while (!queue.empty()) {
    PendingNode node = std::move(queue.front());
    queue.pop_front();
    BuildNode& b = built[node.id];
    b.count = node.rows.size();
    b.value = stable_mean(y, node.rows);

    if (splits >= budget || node.rows.size() < cfg.min_parent_size) continue;
    const double parent_sse = sse_about(y, node.rows, b.value);
    if (!(parent_sse > 0.0)) continue;

    std::span<const std::size_t> features = all_features;
    if (subsample) {
      drawn = all_features;
      for (std::size_t i = 0; i < mtry; ++i) {
        std::swap(drawn[i], drawn[i + rng->index(p - i)]);
      }
      drawn.resize(mtry);
      std::sort(drawn.begin(), drawn.end());
      features = drawn;
    }
    const auto choice =
        search(X, y, node.rows, features, cfg.min_leaf_size, b.value, parent_sse);
    if (!choice || !(choice->child_sse < parent_sse - kSplitTieTolerance * parent_sse)) continue;

    PendingNode left{{}, built.size()};
    PendingNode right{{}, built.size() + 1};
    for (std::size_t r : node.rows) {
      const double x = X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(choice->feature));
      (x < choice->threshold ? left.rows : right.rows).push_back(r);
    }
    BuildNode& parent = built[node.id];
    parent.feature = static_cast<int>(choice->feature);
    parent.threshold = choice->threshold;
    parent.left = left.id;
    parent.right = right.id;
    built.push_back({});
    built.push_back({});
    ++splits;
    queue.push_back(std::move(left));
    queue.push_back(std::move(right));
  }

  model.nodes.reserve(built.size());
  to_preorder(built, 0, model.nodes);
  return model;
}

Eigen::VectorXd predict_tree(const TreeModel& model, const Eigen::MatrixXd& X) {
  if (static_cast<std::size_t>(X.cols()) != model.input_dim) {
    throw Error(Errc::DimensionMismatch, "tree expects " + std::to_string(model.input_dim) +
                                             " features, got " + std::to_string(X.cols()));
  }
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index r = 0; r < X.rows(); ++r) out(r) = model.nodes[model.leaf_for(X, r)].value;
  return out;
}

}  // namespace emissionscope
