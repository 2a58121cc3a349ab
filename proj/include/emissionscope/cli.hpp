#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "emissionscope/experiment.hpp"
#include "emissionscope/report.hpp"

namespace emissionscope::cli {

enum class Verb { Synth, Dataset, Train, Sweep, Converge, Compare, Report };

std::string_view verb_name(Verb verb) noexcept;

struct Command {
  Verb verb = Verb::Synth;
  bool help = false;
  std::string help_text;

  // global
  std::uint64_t seed = 0;
  std::string out;  // empty: per-verb default
  ReportFormat format = ReportFormat::Json;

  // synth
  double duration_s = 600.0;
  double noise_std = 0.1;
  double pems_rate_hz = 1.0;

  // dataset
  std::vector<std::string> sensors;
  std::string pems;
  double rate_hz = 100.0;
  std::size_t window_len = 25;
  double overlap = 0.5;
  LabelMode label_mode = LabelMode::Nearest;
  double max_gap_s = 2.0;
  std::string mask = "all";

  // train / sweep / converge
  std::string data;
  std::optional<Family> family;
  std::optional<GasId> gas;
  std::vector<std::vector<std::size_t>> hidden;
  double learning_rate = 0.01;
  std::size_t epochs = 1000;
  std::vector<std::size_t> min_leaf;
  std::vector<std::size_t> min_parent;
  std::optional<std::size_t> max_splits;
  std::vector<std::size_t> trees;
  std::optional<std::size_t> mtry;
  bool no_bootstrap = false;
  double train_fraction = 0.7;
  SplitStrategy split = SplitStrategy::Random;
  RangeMode range_mode = RangeMode::PredictedRange;
  double tolerance = 0.005;

  // compare / report
  std::vector<std::string> inputs;

  bool operator==(const Command&) const = default;

  SplitSpec split_spec() const { return {train_fraction, split, seed}; }
  MlpConfig mlp_config(std::size_t arch_index = 0) const;
  TreeConfig tree_config(std::size_t leaf_index = 0, std::size_t parent_index = 0) const;
  ForestConfig forest_config(std::size_t trees_index = 0) const;
};

/// argv excludes the program name. Throws Error(UsageError) naming the
/// offending flag; --help yields a Command with help set.
Command parse_args(const std::vector<std::string>& argv);

/// Canonical argument vector; parse_args(to_args(c)) == c.
std::vector<std::string> to_args(const Command& cmd);

/// Runs the command. Returns 0 on success, 1 on domain errors, 2 on usage
/// errors. Messages go to `log`; artifacts are written atomically.
int execute(const Command& cmd, std::ostream& log);

/// parse_args + execute with the exit-code contract applied.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// Writes via a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace emissionscope::cli
