#include "emissionscope/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "emissionscope/csv.hpp"
#include "emissionscope/dataset_io.hpp"
#include "emissionscope/error.hpp"
#include "emissionscope/ingest.hpp"
#include "emissionscope/model.hpp"
#include "emissionscope/synth.hpp"

namespace emissionscope::cli {

namespace fs = std::filesystem;

std::string_view verb_name(Verb verb) noexcept {
  switch (verb) {
    case Verb::Synth: return "synth";
    case Verb::Dataset: return "dataset";
    case Verb::Train: return "train";
    case Verb::Sweep: return "sweep";
    case Verb::Converge: return "converge";
    case Verb::Compare: return "compare";
    case Verb::Report: return "report";
  }
  return "?";
}

MlpConfig Command::mlp_config(std::size_t arch_index) const {
  MlpConfig cfg;
  if (arch_index < hidden.size()) cfg.hidden_layers = hidden[arch_index];
  cfg.learning_rate = learning_rate;
  cfg.epochs = epochs;
  cfg.seed = seed;
  return cfg;
}

TreeConfig Command::tree_config(std::size_t leaf_index, std::size_t parent_index) const {
  TreeConfig cfg;
  if (leaf_index < min_leaf.size()) cfg.min_leaf_size = min_leaf[leaf_index];
  if (parent_index < min_parent.size()) cfg.min_parent_size = min_parent[parent_index];
  cfg.max_splits = max_splits;
  cfg.seed = seed;
  return cfg;
}

ForestConfig Command::forest_config(std::size_t trees_index) const {
  ForestConfig cfg;
  cfg.tree = tree_config();
  cfg.bootstrap = !no_bootstrap;
  cfg.mtry = mtry;
  cfg.seed = seed;
  if (trees_index < trees.size()) cfg.n_trees = trees[trees_index];
  return cfg;
}

namespace {

[[noreturn]] void usage(const std::string& message) { throw Error(Errc::UsageError, message); }

std::vector<std::size_t> parse_layers(const std::string& flag, const std::string& text) {
  std::vector<std::size_t> layers;
  std::string cleaned;
  for (char c : text) cleaned += (c == '[' || c == ']' || c == ' ') ? ',' : c;
  for (std::string_view token : csv::split(cleaned, ',')) {
    if (token.empty()) continue;
    auto v = csv::parse_double(token);
    if (!v || *v < 1 || *v != static_cast<double>(static_cast<std::size_t>(*v))) {
      usage(flag + ": '" + text + "' is not a list of positive layer sizes");
    }
    layers.push_back(static_cast<std::size_t>(*v));
  }
  if (layers.empty()) usage(flag + ": empty layer list");
  return layers;
}

std::string join(const std::vector<std::size_t>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  return s;
}

struct RawOptions {
  std::string format = "json";
  std::string family;
  std::string gas;
  std::string label = "nearest";
  std::string split = "random";
  std::string range_mode = "predicted_range";
  std::vector<std::string> hidden;
  std::size_t max_splits = 0;
  std::size_t mtry = 0;
};

}  // namespace

Command parse_args(const std::vector<std::string>& argv) {
  Command cmd;
  RawOptions raw;
  CLI::App app{"Inertial-sensor emission regression pipeline", "emissionscope"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  auto add_seed_out = [&](CLI::App* sub, const std::string& out_help) {
    sub->add_option("--seed", cmd.seed, "Seed for every random draw");
    sub->add_option("--out", cmd.out, out_help);
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", raw.format, "csv or json");
  };
  auto add_split = [&](CLI::App* sub) {
    sub->add_option("--train-fraction", cmd.train_fraction, "Training share of rows");
    sub->add_option("--split", raw.split, "random or chronological");
  };
  auto add_data_gas = [&](CLI::App* sub) {
    sub->add_option("--data", cmd.data, "Dataset CSV (sidecar JSON is read when present)");
    sub->add_option("--gas", raw.gas, "Target gas: co, no, no2, nox, co2");
  };
  auto add_tree = [&](CLI::App* sub) {
    sub->add_option("--min-leaf", cmd.min_leaf, "Minimum leaf size(s)")->delimiter(',');
    sub->add_option("--min-parent", cmd.min_parent, "Minimum parent size(s)")->delimiter(',');
    sub->add_option("--max-splits", raw.max_splits, "Split budget (default n_train - 1)");
  };
  auto add_forest = [&](CLI::App* sub) {
    sub->add_option("--trees", cmd.trees, "Tree count(s)")->delimiter(',');
    sub->add_option("--mtry", raw.mtry, "Features per split (default all)");
    sub->add_flag("--no-bootstrap", cmd.no_bootstrap, "Train every tree on all rows");
  };
  auto add_mlp = [&](CLI::App* sub) {
    sub->add_option("--hidden", raw.hidden, "Hidden layer sizes, e.g. 100,90,80 (repeatable)");
    sub->add_option("--lr", cmd.learning_rate, "Learning rate");
    sub->add_option("--epochs", cmd.epochs, "Gradient descent iterations");
  };
  auto add_family = [&](CLI::App* sub) {
    sub->add_option("--family", raw.family, "lr, mlp, dtr or rf");
  };

  CLI::App* synth = app.add_subcommand("synth", "Generate synthetic sensor and PEMS streams");
  add_seed_out(synth, "Output directory");
  synth->add_option("--duration", cmd.duration_s, "Seconds of data");
  synth->add_option("--noise", cmd.noise_std, "Noise scale");
  synth->add_option("--rate", cmd.rate_hz, "Inertial sampling rate (Hz)");
  synth->add_option("--pems-rate", cmd.pems_rate_hz, "PEMS logging rate (Hz)");

  CLI::App* dataset = app.add_subcommand("dataset", "Window, featurize and label streams");
  dataset->add_option("--sensors", cmd.sensors, "Inertial CSVs, sensor 1 first")->expected(1, 8);
  dataset->add_option("--pems", cmd.pems, "PEMS CSV");
  dataset->add_option("--rate", cmd.rate_hz, "Inertial sampling rate (Hz)");
  dataset->add_option("--window", cmd.window_len, "Window length in samples");
  dataset->add_option("--overlap", cmd.overlap, "Overlap fraction in [0, 1)");
  dataset->add_option("--label", raw.label, "nearest, window_mean or interpolate");
  dataset->add_option("--max-gap", cmd.max_gap_s, "Largest window-to-record distance (s)");
  dataset->add_option("--mask", cmd.mask, "Channel mask, e.g. all, accel, s1:accel");
  dataset->add_option("--out", cmd.out, "Dataset CSV path");

  CLI::App* train = app.add_subcommand("train", "Fit one model on the training split");
  CLI::App* sweep = app.add_subcommand("sweep", "Fit and score a hyperparameter grid");
  for (CLI::App* sub : {train, sweep}) {
    add_data_gas(sub);
    add_family(sub);
    add_mlp(sub);
    add_tree(sub);
    add_forest(sub);
    add_split(sub);
    add_seed_out(sub, "Output path");
  }
  sweep->add_option("--range-mode", raw.range_mode, "NRMSE range: predicted_range or actual_range");
  add_format(sweep);

  CLI::App* converge = app.add_subcommand("converge", "R^2 against forest size");
  add_data_gas(converge);
  add_tree(converge);
  add_forest(converge);
  converge->add_option("--tolerance", cmd.tolerance, "Convergence tolerance on R^2");
  add_split(converge);
  add_seed_out(converge, "Output path");
  add_format(converge);

  CLI::App* compare = app.add_subcommand("compare", "Best R^2 per gas and family");
  compare->add_option("--in", cmd.inputs, "Sweep report JSON files")->expected(1, -1);
  compare->add_option("--out", cmd.out, "Output path");
  add_format(compare);

  CLI::App* report = app.add_subcommand("report", "Convert a report JSON to CSV or JSON");
  report->add_option("--in", cmd.inputs, "Report JSON")->expected(1);
  report->add_option("--out", cmd.out, "Output path");
  add_format(report);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cmd.help = true;
    cmd.help_text = app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help();
    return cmd;
  } catch (const CLI::CallForAllHelp&) {
    cmd.help = true;
    cmd.help_text = app.help("", CLI::AppFormatMode::All);
    return cmd;
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::map<std::string, Verb> verbs = {
      {"synth", Verb::Synth},       {"dataset", Verb::Dataset}, {"train", Verb::Train},
      {"sweep", Verb::Sweep},       {"converge", Verb::Converge},
      {"compare", Verb::Compare},   {"report", Verb::Report}};
  cmd.verb = verbs.at(chosen->get_name());

  auto given = [&](const std::string& flag) {
    const CLI::Option* opt = chosen->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--format")) {
    auto f = parse_report_format(raw.format);
    if (!f) usage("--format: expected csv or json, got '" + raw.format + "'");
    cmd.format = *f;
  }
  if (given("--family")) {
    cmd.family = parse_family(raw.family);
    if (!cmd.family) usage("--family: expected lr, mlp, dtr or rf, got '" + raw.family + "'");
  }
  if (given("--gas")) {
    cmd.gas = parse_gas(raw.gas);
    if (!cmd.gas || !is_modeled(*cmd.gas)) {
      usage("--gas: expected co, no, no2, nox or co2, got '" + raw.gas + "'");
    }
  }
  if (given("--label")) {
    auto mode = parse_label_mode(raw.label);
    if (!mode) usage("--label: expected nearest, window_mean or interpolate");
    cmd.label_mode = *mode;
  }
  if (given("--split")) {
    auto s = parse_split_strategy(raw.split);
    if (!s) usage("--split: expected random or chronological");
    cmd.split = *s;
  }
  if (given("--range-mode")) {
    auto m = parse_range_mode(raw.range_mode);
    if (!m) usage("--range-mode: expected predicted_range or actual_range");
    cmd.range_mode = *m;
  }
  for (const std::string& h : raw.hidden) cmd.hidden.push_back(parse_layers("--hidden", h));
  if (given("--max-splits")) cmd.max_splits = raw.max_splits;
  if (given("--mtry")) cmd.mtry = raw.mtry;
  return cmd;
}

std::vector<std::string> to_args(const Command& cmd) {
  std::vector<std::string> a{std::string(verb_name(cmd.verb))};
  auto opt = [&](const std::string& flag, const std::string& value) {
    a.push_back(flag);
    a.push_back(value);
  };
  auto num = [](double v) { return csv::format_exact(v); };
  auto common_out = [&] {
    if (!cmd.out.empty()) opt("--out", cmd.out);
  };
  auto seed = [&] { opt("--seed", std::to_string(cmd.seed)); };
  auto format = [&] { opt("--format", cmd.format == ReportFormat::Csv ? "csv" : "json"); };
  auto split = [&] {
    opt("--train-fraction", num(cmd.train_fraction));
    opt("--split", std::string(split_strategy_name(cmd.split)));
  };
  auto data_gas = [&] {
    if (!cmd.data.empty()) opt("--data", cmd.data);
    if (cmd.gas) opt("--gas", std::string(gas_token(*cmd.gas)));
  };
  auto tree = [&] {
    if (!cmd.min_leaf.empty()) opt("--min-leaf", join(cmd.min_leaf));
    if (!cmd.min_parent.empty()) opt("--min-parent", join(cmd.min_parent));
    if (cmd.max_splits) opt("--max-splits", std::to_string(*cmd.max_splits));
  };
  auto forest = [&] {
    if (!cmd.trees.empty()) opt("--trees", join(cmd.trees));
    if (cmd.mtry) opt("--mtry", std::to_string(*cmd.mtry));
    if (cmd.no_bootstrap) a.push_back("--no-bootstrap");
  };

  switch (cmd.verb) {
    case Verb::Synth:
      seed();
      common_out();
      opt("--duration", num(cmd.duration_s));
      opt("--noise", num(cmd.noise_std));
      opt("--rate", num(cmd.rate_hz));
      opt("--pems-rate", num(cmd.pems_rate_hz));
      break;
    case Verb::Dataset:
      if (!cmd.sensors.empty()) {
        a.push_back("--sensors");
        a.insert(a.end(), cmd.sensors.begin(), cmd.sensors.end());
      }
      if (!cmd.pems.empty()) opt("--pems", cmd.pems);
      opt("--rate", num(cmd.rate_hz));
      opt("--window", std::to_string(cmd.window_len));
      opt("--overlap", num(cmd.overlap));
      opt("--label", std::string(label_mode_name(cmd.label_mode)));
      opt("--max-gap", num(cmd.max_gap_s));
      opt("--mask", cmd.mask);
      common_out();
      break;
    case Verb::Train:
    case Verb::Sweep:
      data_gas();
      if (cmd.family) opt("--family", std::string(family_token(*cmd.family)));
      for (const auto& h : cmd.hidden) opt("--hidden", join(h));
      opt("--lr", num(cmd.learning_rate));
      opt("--epochs", std::to_string(cmd.epochs));
      tree();
      forest();
      split();
      seed();
      common_out();
      if (cmd.verb == Verb::Sweep) {
        opt("--range-mode", std::string(range_mode_name(cmd.range_mode)));
        format();
      }
      break;
    case Verb::Converge:
      data_gas();
      tree();
      forest();
      opt("--tolerance", num(cmd.tolerance));
      split();
      seed();
      common_out();
      format();
      break;
    case Verb::Compare:
    case Verb::Report:
      for (const std::string& in : cmd.inputs) opt("--in", in);
      common_out();
      format();
      break;
  }
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write '" + tmp.string() + "'");
    out << bytes;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(Errc::IoError, "write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::IoError, "cannot rename onto '" + path + "'");
  }
}

namespace {

std::string with_extension(const std::string& path, const std::string& ext) {
  fs::path p(path);
  p.replace_extension(ext);
  return p.string();
}

std::string sidecar_path(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  const std::string stem = p.stem().string();
  return (p.parent_path() / (stem + suffix)).string();
}

nlohmann::json parse_json_file(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedHeader, "'" + path + "' is not valid JSON: " + e.what());
  }
}

Dataset load_dataset(const std::string& path) {
  if (path.empty()) usage("--data is required");
  std::istringstream in(read_file(path));
  std::optional<nlohmann::json> sidecar;
  const std::string side = with_extension(path, ".json");
  if (side != path && fs::exists(side)) sidecar = parse_json_file(side);
  try {
    return read_dataset_csv(in, sidecar);
  } catch (const Error& e) {
    throw Error(e.code(), "'" + path + "': " + e.what());
  }
}

GasId require_gas(const Command& cmd) {
  if (!cmd.gas) usage("--gas is required");
  return *cmd.gas;
}

Family require_family(const Command& cmd) {
  if (!cmd.family) usage("--family is required");
  return *cmd.family;
}

std::string default_out(const Command& cmd, const std::string& stem) {
  if (!cmd.out.empty()) return cmd.out;
  return stem + (cmd.format == ReportFormat::Csv ? ".csv" : ".json");
}

// Per-gas tree counts used when a forest sweep names no --trees.
std::size_t table_tree_count(GasId gas) {
  switch (gas) {
    case GasId::CO: return 150;
    case GasId::NO: return 135;
    case GasId::NO2: return 200;
    case GasId::NOX: return 85;
    case GasId::CO2: return 90;
    default: return 100;
  }
}

std::vector<ModelConfig> build_grid(const Command& cmd, Family family, GasId gas) {
  switch (family) {
    case Family::Linear:
      return {LinearConfig{}};
    case Family::Mlp: {
      if (cmd.hidden.empty()) return default_mlp_grid(cmd.mlp_config());
      std::vector<ModelConfig> grid;
      for (std::size_t i = 0; i < cmd.hidden.size(); ++i) grid.emplace_back(cmd.mlp_config(i));
      return grid;
    }
    case Family::Tree: {
      const std::vector<std::size_t> leaves = cmd.min_leaf.empty() ? std::vector<std::size_t>{1, 2, 3} : cmd.min_leaf;
      const std::vector<std::size_t> parents = cmd.min_parent.empty() ? std::vector<std::size_t>{5, 10} : cmd.min_parent;
      std::vector<ModelConfig> grid;
      for (std::size_t leaf : leaves) {
        for (std::size_t parent : parents) {
          TreeConfig cfg = cmd.tree_config();
          cfg.min_leaf_size = leaf;
          cfg.min_parent_size = parent;
          grid.emplace_back(cfg);
        }
      }
      return grid;
    }
    case Family::Forest: {
      const std::vector<std::size_t> counts =
          cmd.trees.empty() ? std::vector<std::size_t>{table_tree_count(gas)} : cmd.trees;
      return forest_grid(counts, cmd.forest_config());
    }
  }
  return {};
}

void run_synth(const Command& cmd, std::ostream& log) {
  SynthConfig cfg = SynthConfig::defaults();
  cfg.duration_s = cmd.duration_s;
  cfg.noise_std = cmd.noise_std;
  cfg.rate_hz = cmd.rate_hz;
  cfg.pems_rate_hz = cmd.pems_rate_hz;
  cfg.seed = cmd.seed;
  const SynthOutput out = generate(cfg);
  const fs::path dir = cmd.out.empty() ? fs::path("synth") : fs::path(cmd.out);
  std::ostringstream s1, s2, pems;
  write_inertial_csv(s1, out.cabin);
  write_inertial_csv(s2, out.stick);
  write_pems_csv(pems, out.pems);
  write_file_atomic((dir / "s1.csv").string(), s1.str());
  write_file_atomic((dir / "s2.csv").string(), s2.str());
  write_file_atomic((dir / "pems.csv").string(), pems.str());
  write_file_atomic((dir / "truth.json").string(), truth_to_json(out.truth).dump(2) + "\n");
  log << "wrote " << out.cabin.samples.size() << " samples per sensor and "
      << out.pems.records.size() << " PEMS records to " << dir.string() << '\n';
}

void run_dataset(const Command& cmd, std::ostream& log) {
  if (cmd.sensors.empty()) usage("--sensors is required");
  if (cmd.pems.empty()) usage("--pems is required");
  std::vector<SensorSeries> sensors;
  for (std::size_t i = 0; i < cmd.sensors.size(); ++i) {
    std::istringstream in(read_file(cmd.sensors[i]));
    try {
      sensors.push_back(parse_inertial_csv(in, "s" + std::to_string(i + 1), cmd.rate_hz));
    } catch (const Error& e) {
      throw Error(e.code(), "'" + cmd.sensors[i] + "': " + e.what());
    }
  }
  std::istringstream pin(read_file(cmd.pems));
  EmissionSeries emissions;
  try {
    emissions = derive_nox(parse_pems_csv(pin));
  } catch (const Error& e) {
    throw Error(e.code(), "'" + cmd.pems + "': " + e.what());
  }
  WindowConfig wcfg{cmd.window_len, cmd.overlap};
  LabelPolicy policy{cmd.label_mode, cmd.max_gap_s};
  ChannelMask mask = ChannelMask::parse(cmd.mask);
  if (cmd.mask.find(':') == std::string::npos) {
    mask.sensors.clear();
    for (std::size_t i = 0; i < sensors.size(); ++i) mask.sensors.push_back(i);
  }
  const Dataset ds = build_dataset(sensors, emissions, wcfg, policy, mask);
  const std::string out = cmd.out.empty() ? "dataset.csv" : cmd.out;
  write_file_atomic(out, dataset_csv(ds));
  write_file_atomic(with_extension(out, ".json"), dataset_sidecar(ds).dump(2) + "\n");
  log << "wrote " << ds.size() << " rows x " << ds.X.cols() << " features to " << out
      << " (" << ds.dropped << " windows dropped)\n";
}

void run_train(const Command& cmd, std::ostream& log) {
  const Family family = require_family(cmd);
  const GasId gas = require_gas(cmd);
  const Dataset ds = load_dataset(cmd.data);
  const std::vector<ModelConfig> grid = build_grid(cmd, family, gas);
  const ModelConfig& cfg = grid.front();
  const auto [train, test] = split_dataset(ds, cmd.split_spec());
  const Model model = fit(train.X, train.target(gas), cfg);
  const MetricReport m = compute_metrics(test.target(gas), predict(model, test.X));
  const std::string out = cmd.out.empty() ? "model.json" : cmd.out;
  nlohmann::json eval{{"gas", gas_name(gas)},
                      {"family", family_token(family)},
                      {"config", describe(cfg)},
                      {"fingerprint", fingerprint(ds)},
                      {"train_rows", train.size()},
                      {"test_rows", test.size()},
                      {"r2", format_metric(m.r2)},
                      {"rmse", format_metric(m.rmse)},
                      {"mae", format_metric(m.mae)},
                      {"nrmse_pct", format_metric(m.nrmse_pct)}};
  write_file_atomic(out, model_to_json(model).dump() + "\n");
  write_file_atomic(sidecar_path(out, ".eval.json"), eval.dump(2) + "\n");
  log << family_label(family) << ' ' << describe(cfg) << " on " << gas_name(gas)
      << ": test R2 " << format_metric(m.r2) << ", RMSE " << format_metric(m.rmse) << '\n';
}

void run_sweep_cmd(const Command& cmd, std::ostream& log) {
  const Family family = require_family(cmd);
  const GasId gas = require_gas(cmd);
  const Dataset ds = load_dataset(cmd.data);
  const std::vector<ModelConfig> grid = build_grid(cmd, family, gas);
  const SweepReport report = run_sweep(ds, gas, family, grid, cmd.split_spec(), cmd.range_mode);
  const std::string out = default_out(cmd, "sweep");
  write_file_atomic(out, emit_report(report, cmd.format));
  write_file_atomic(sidecar_path(out, ".meta.json"), sweep_sidecar(report).dump(2) + "\n");
  std::size_t failed = 0;
  for (const SweepRow& row : report.rows) failed += row.metrics ? 0 : 1;
  log << "swept " << report.rows.size() << " " << family_label(family) << " configs on "
      << gas_name(gas) << " (" << failed << " failed) -> " << out << '\n';
}

void run_converge(const Command& cmd, std::ostream& log) {
  const GasId gas = require_gas(cmd);
  const Dataset ds = load_dataset(cmd.data);
  std::vector<std::size_t> counts = cmd.trees;
  if (counts.empty()) counts = {10, 25, 50, 85, 90, 100, 135, 150, 200};
  const ConvergenceCurve curve =
      forest_convergence(ds, gas, counts, cmd.forest_config(), cmd.split_spec(), cmd.tolerance);
  const std::string out = default_out(cmd, "convergence");
  write_file_atomic(out, emit_report(curve, cmd.format));
  log << gas_name(gas) << " converges at " << curve.selected_n_trees << " trees -> " << out << '\n';
}

void run_compare(const Command& cmd, std::ostream& log) {
  if (cmd.inputs.empty()) usage("--in is required");
  std::vector<SweepReport> reports;
  for (const std::string& path : cmd.inputs) {
    ReportDoc doc = report_from_json(parse_json_file(path));
    if (!std::holds_alternative<SweepReport>(doc)) {
      throw Error(Errc::MalformedHeader, "'" + path + "' is not a sweep report");
    }
    reports.push_back(std::get<SweepReport>(std::move(doc)));
  }
  const ComparisonTable table = compare_best(reports);
  const std::string out = default_out(cmd, "comparison");
  write_file_atomic(out, emit_report(table, cmd.format));
  log << "compared " << reports.size() << " reports -> " << out << '\n';
}

void run_report(const Command& cmd, std::ostream& log) {
  if (cmd.inputs.size() != 1) usage("--in takes exactly one report");
  const ReportDoc doc = report_from_json(parse_json_file(cmd.inputs.front()));
  const std::string out = default_out(cmd, "report");
  write_file_atomic(out, emit_report(doc, cmd.format));
  log << "wrote " << out << '\n';
}

}  // namespace

int execute(const Command& cmd, std::ostream& log) {
  if (cmd.help) {
    log << cmd.help_text;
    return 0;
  }
  switch (cmd.verb) {
    case Verb::Synth: run_synth(cmd, log); break;
    case Verb::Dataset: run_dataset(cmd, log); break;
    case Verb::Train: run_train(cmd, log); break;
    case Verb::Sweep: run_sweep_cmd(cmd, log); break;
    case Verb::Converge: run_converge(cmd, log); break;
    case Verb::Compare: run_compare(cmd, log); break;
    case Verb::Report: run_report(cmd, log); break;
  }
  return 0;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  try {
    return execute(parse_args(argv), out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::UsageError ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace emissionscope::cli
