#include "emissionscope/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "emissionscope/dataset_io.hpp"
#include "emissionscope/error.hpp"
#include "emissionscope/forest.hpp"
#include "emissionscope/parallel.hpp"
#include "emissionscope/rng.hpp"

namespace emissionscope {

std::string_view split_strategy_name(SplitStrategy s) noexcept {
  return s == SplitStrategy::Random ? "random" : "chronological";
}

std::optional<SplitStrategy> parse_split_strategy(std::string_view text) noexcept {
  if (text == "random") return SplitStrategy::Random;
  if (text == "chronological") return SplitStrategy::Chronological;
  return std::nullopt;
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(Errc::InvalidConfig, "train fraction must lie in (0, 1)");
  }
}

SplitIndices split_indices(const Dataset& ds, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = ds.size();
  if (n < 2) throw Error(Errc::TooFewRows, "need at least 2 rows to split, have " + std::to_string(n));
  auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (spec.strategy == SplitStrategy::Random) {
    Rng rng(spec.seed);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return ds.rows[a].window_center_t < ds.rows[b].window_center_t;
    });
  }
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, const SplitSpec& spec) {
  const SplitIndices idx = split_indices(ds, spec);
  return {ds.select(idx.train), ds.select(idx.test)};
}

namespace {

std::string partition_hash(std::span<const std::size_t> rows) {
  std::string bytes;
  for (std::size_t r : rows) bytes += std::to_string(r) + ',';
  return fnv1a_hex(bytes);
}

void require_gas(const Dataset& ds, GasId gas) { (void)ds.target(gas); }

}  // namespace

SweepReport run_sweep(const Dataset& ds, GasId gas, Family family,
                      std::span<const ModelConfig> grid, const SplitSpec& spec, RangeMode mode,
                      std::size_t threads) {
  if (grid.empty()) throw Error(Errc::EmptyInput, "sweep grid is empty");
  for (const ModelConfig& cfg : grid) {
    if (family_of(cfg) != family) {
      throw Error(Errc::InvalidConfig, "grid entry " + describe(cfg) + " is not a " +
                                           std::string(family_token(family)) + " config");
    }
  }
  require_gas(ds, gas);
  const SplitIndices idx = split_indices(ds, spec);
  const Dataset train = ds.select(idx.train);
  const Dataset test = ds.select(idx.test);
  const Eigen::VectorXd& y_train = train.target(gas);
  const Eigen::VectorXd& y_test = test.target(gas);

  SweepReport report;
  report.gas = gas;
  report.family = family;
  report.split = spec;
  report.range_mode = mode;
  report.fingerprint = fingerprint(ds);
  report.test_partition = partition_hash(idx.test);
  report.train_rows = idx.train.size();
  report.test_rows = idx.test.size();
  report.rows.resize(grid.size());

  if (threads == 0) threads = default_thread_count();
  const std::size_t inner = grid.size() > 1 ? 1 : threads;
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    SweepRow& row = report.rows[i];
    row.config = describe(grid[i]);
    row.params = grid[i];
    const auto start = std::chrono::steady_clock::now();
    try {
      const Model model = fit(train.X, y_train, grid[i], inner);
      const Eigen::VectorXd predicted = predict(model, test.X);
      if (!predicted.allFinite()) {
        throw Error(Errc::NonFiniteLoss, "model produced non-finite predictions");
      }
      row.metrics = compute_metrics(y_test, predicted, mode);
    } catch (const Error& e) {
      row.error = e.what();
    }
    row.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return report;
}

std::vector<ModelConfig> default_mlp_grid(const MlpConfig& base) {
  std::vector<ModelConfig> grid;
  for (std::vector<std::size_t> arch : std::vector<std::vector<std::size_t>>{
           {40, 30}, {40, 30, 20}, {100, 90, 80}, {200, 190, 180}}) {
    MlpConfig cfg = base;
    cfg.hidden_layers = arch;
    grid.emplace_back(cfg);
  }
  return grid;
}

std::vector<ModelConfig> default_tree_grid(const TreeConfig& base) {
  std::vector<ModelConfig> grid;
  for (std::size_t leaf : {1, 2, 3}) {
    for (std::size_t parent : {5, 10}) {
      TreeConfig cfg = base;
      cfg.min_leaf_size = leaf;
      cfg.min_parent_size = parent;
      grid.emplace_back(cfg);
    }
  }
  return grid;
}

std::vector<ModelConfig> forest_grid(std::span<const std::size_t> tree_counts,
                                     const ForestConfig& base) {
  std::vector<ModelConfig> grid;
  for (std::size_t count : tree_counts) {
    ForestConfig cfg = base;
    cfg.n_trees = count;
    grid.emplace_back(cfg);
  }
  return grid;
}

std::size_t select_converged(std::span<const ConvergencePoint> points, double tolerance) {
  if (points.empty()) throw Error(Errc::EmptyInput, "no convergence points");
  const auto& last = points.back();
  if (!last.r2) return last.n_trees;
  // Walk back while every larger count stays within tolerance of the last.
  std::size_t selected = points.size() - 1;
  while (selected > 0) {
    const auto& prev = points[selected - 1];
    if (!prev.r2 || std::abs(*prev.r2 - *last.r2) > tolerance) break;
    --selected;
  }
  return points[selected].n_trees;
}

ConvergenceCurve forest_convergence(const Dataset& ds, GasId gas,
                                    std::span<const std::size_t> tree_counts,
                                    const ForestConfig& base, const SplitSpec& spec,
                                    double tolerance, std::size_t threads) {
  if (tree_counts.empty()) throw Error(Errc::EmptyInput, "no tree counts given");
  for (std::size_t i = 0; i < tree_counts.size(); ++i) {
    if (tree_counts[i] < 1 || (i > 0 && tree_counts[i] <= tree_counts[i - 1])) {
      throw Error(Errc::InvalidConfig, "tree counts must be positive and strictly increasing");
    }
  }
  if (!(tolerance >= 0.0)) throw Error(Errc::InvalidConfig, "tolerance must be non-negative");
  require_gas(ds, gas);
  const SplitIndices idx = split_indices(ds, spec);
  const Dataset train = ds.select(idx.train);
  const Dataset test = ds.select(idx.test);

  ForestConfig cfg = base;
  cfg.n_trees = tree_counts.back();
  const ForestModel forest = fit_forest(train.X, train.target(gas), cfg, threads);

  ConvergenceCurve curve;
  curve.gas = gas;
  curve.base = base;
  curve.split = spec;
  curve.fingerprint = fingerprint(ds);
  curve.tolerance = tolerance;
  for (std::size_t count : tree_counts) {
    const Eigen::VectorXd predicted = predict_forest_prefix(forest, test.X, count);
    curve.points.push_back({count, compute_metrics(test.target(gas), predicted).r2});
  }
  curve.selected_n_trees = select_converged(curve.points, tolerance);
  return curve;
}

const ComparisonCell& ComparisonTable::at(GasId gas, Family family) const {
  const auto g = std::find(gases.begin(), gases.end(), gas);
  const auto f = std::find(families.begin(), families.end(), family);
  if (g == gases.end() || f == families.end()) {
    throw Error(Errc::MissingChannel, "comparison table has no cell for " +
                                          std::string(gas_name(gas)) + "/" +
                                          std::string(family_label(family)));
  }
  return cells[static_cast<std::size_t>(g - gases.begin())]
              [static_cast<std::size_t>(f - families.begin())];
}

ComparisonTable compare_best(std::span<const SweepReport> reports) {
  if (reports.empty()) throw Error(Errc::EmptyInput, "no reports to compare");
  ComparisonTable table;
  std::vector<GasId> gas_order(kModeledGases.begin(), kModeledGases.end());
  for (GasId gas : kAllGases) {
    if (!is_modeled(gas)) gas_order.push_back(gas);
  }
  for (GasId gas : gas_order) {
    for (const SweepReport& r : reports) {
      if (r.gas == gas) {
        table.gases.push_back(gas);
        break;
      }
    }
  }
  for (Family family : {Family::Mlp, Family::Tree, Family::Forest, Family::Linear}) {
    for (const SweepReport& r : reports) {
      if (r.family == family) {
        table.families.push_back(family);
        break;
      }
    }
  }
  table.cells.assign(table.gases.size(), std::vector<ComparisonCell>(table.families.size()));
  for (std::size_t g = 0; g < table.gases.size(); ++g) {
    for (std::size_t f = 0; f < table.families.size(); ++f) {
      ComparisonCell& cell = table.cells[g][f];
      for (const SweepReport& r : reports) {
        if (r.gas != table.gases[g] || r.family != table.families[f]) continue;
        for (const SweepRow& row : r.rows) {
          if (!row.metrics || !row.metrics->r2) continue;
          if (!cell.r2 || *row.metrics->r2 > *cell.r2) {
            cell.r2 = row.metrics->r2;
            cell.config = row.config;
          }
        }
      }
    }
  }
  return table;
}

}  // namespace emissionscope
