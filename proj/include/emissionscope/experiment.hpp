#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emissionscope/gas.hpp"
#include "emissionscope/metrics.hpp"
#include "emissionscope/model.hpp"
#include "emissionscope/windowing.hpp"

namespace emissionscope {

enum class SplitStrategy { Random, Chronological };

std::string_view split_strategy_name(SplitStrategy s) noexcept;
std::optional<SplitStrategy> parse_split_strategy(std::string_view text) noexcept;

struct SplitSpec {
  double train_fraction = 0.7;
  SplitStrategy strategy = SplitStrategy::Random;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Row indices of each side, ascending.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Train size is round(train_fraction * n) clamped so both sides are non-empty.
SplitIndices split_indices(const Dataset& ds, const SplitSpec& spec);
std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, const SplitSpec& spec);

struct SweepRow {
  std::string config;       // descriptor, e.g. "[2 10]"
  ModelConfig params;
  std::optional<MetricReport> metrics;  // empty when the fit failed
  std::string error;        // module error text for failed rows
  double runtime_s = 0.0;   // wall clock; kept out of the deterministic report
};

struct SweepReport {
  GasId gas = GasId::CO;
  Family family = Family::Linear;
  SplitSpec split;
  RangeMode range_mode = RangeMode::PredictedRange;
  std::string fingerprint;     // dataset content hash
  std::string test_partition;  // hash of the test row indices
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::vector<SweepRow> rows;
};

/// One fit + test evaluation per grid entry on a single shared split. Fit
/// failures become rows with an error instead of aborting the sweep.
SweepReport run_sweep(const Dataset& ds, GasId gas, Family family,
                      std::span<const ModelConfig> grid, const SplitSpec& spec,
                      RangeMode mode = RangeMode::PredictedRange, std::size_t threads = 0);

/// Default grids: four network architectures, min_leaf {1,2,3} x min_parent
/// {5,10} for trees, and one forest per listed tree count.
std::vector<ModelConfig> default_mlp_grid(const MlpConfig& base = {});
std::vector<ModelConfig> default_tree_grid(const TreeConfig& base = {});
std::vector<ModelConfig> forest_grid(std::span<const std::size_t> tree_counts,
                                     const ForestConfig& base);

struct ConvergencePoint {
  std::size_t n_trees = 0;
  std::optional<double> r2;
};

struct ConvergenceCurve {
  GasId gas = GasId::CO;
  ForestConfig base;
  SplitSpec split;
  std::string fingerprint;
  double tolerance = 0.005;
  std::vector<ConvergencePoint> points;
  std::size_t selected_n_trees = 0;
};

/// Smallest count from which every R^2 up to the largest count lies within
/// `tolerance` of the largest count's.
std::size_t select_converged(std::span<const ConvergencePoint> points, double tolerance);

/// Fits the largest forest once; the k-tree forest under the same master seed
/// is its first k members, so every prefix is evaluated from that one fit.
ConvergenceCurve forest_convergence(const Dataset& ds, GasId gas,
                                    std::span<const std::size_t> tree_counts,
                                    const ForestConfig& base, const SplitSpec& spec,
                                    double tolerance = 0.005, std::size_t threads = 0);

struct ComparisonCell {
  std::optional<double> r2;  // empty: no successful row
  std::string config;
};

/// Gas x family matrix of best test R^2.
struct ComparisonTable {
  std::vector<GasId> gases;
  std::vector<Family> families;
  std::vector<std::vector<ComparisonCell>> cells;  // [gas][family]

  const ComparisonCell& at(GasId gas, Family family) const;
};

/// Best row per (gas, family) by R^2; ties go to the earlier grid entry.
ComparisonTable compare_best(std::span<const SweepReport> reports);

}  // namespace emissionscope
