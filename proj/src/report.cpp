#include "emissionscope/report.hpp"

#include <cstdlib>
#include <sstream>

#include "emissionscope/csv.hpp"
#include "emissionscope/error.hpp"

namespace emissionscope {

using nlohmann::json;

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  return std::nullopt;
}

double round_sig6(double value) { return std::strtod(csv::format_sig6(value).c_str(), nullptr); }

namespace {

json metric_json(const std::optional<double>& v) {
  return v ? json(round_sig6(*v)) : json("undefined");
}

std::optional<double> metric_from(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "undefined") {
      throw Error(Errc::MalformedRow, "metric must be a number or \"undefined\"");
    }
    return std::nullopt;
  }
  return j.get<double>();
}

json split_json(const SplitSpec& s) {
  return {{"train_fraction", s.train_fraction},
          {"strategy", split_strategy_name(s.strategy)},
          {"seed", s.seed}};
}

SplitSpec split_from(const json& j) {
  SplitSpec s;
  s.train_fraction = j.at("train_fraction").get<double>();
  auto strategy = parse_split_strategy(j.at("strategy").get<std::string>());
  if (!strategy) throw Error(Errc::MalformedRow, "unknown split strategy");
  s.strategy = *strategy;
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

json sweep_json(const SweepReport& r) {
  json rows = json::array();
  for (const SweepRow& row : r.rows) {
    json jr{{"config", row.config}, {"params", config_to_json(row.params)}};
    if (row.metrics) {
      jr["status"] = "ok";
      jr["r2"] = metric_json(row.metrics->r2);
      jr["rmse"] = metric_json(row.metrics->rmse);
      jr["mae"] = metric_json(row.metrics->mae);
      jr["nrmse_pct"] = metric_json(row.metrics->nrmse_pct);
      jr["n"] = row.metrics->n;
    } else {
      jr["status"] = "failed";
      jr["error"] = row.error;
      for (const char* key : {"r2", "rmse", "mae", "nrmse_pct"}) jr[key] = "undefined";
    }
    rows.push_back(std::move(jr));
  }
  return {{"kind", "sweep"},
          {"gas", gas_name(r.gas)},
          {"family", family_token(r.family)},
          {"split", split_json(r.split)},
          {"range_mode", range_mode_name(r.range_mode)},
          {"fingerprint", r.fingerprint},
          {"test_partition", r.test_partition},
          {"train_rows", r.train_rows},
          {"test_rows", r.test_rows},
          {"rows", rows}};
}

GasId gas_from(const json& j) {
  auto gas = parse_gas(j.get<std::string>());
  if (!gas) throw Error(Errc::MissingChannel, "unknown gas " + j.dump());
  return *gas;
}

SweepReport sweep_from(const json& j) {
  SweepReport r;
  r.gas = gas_from(j.at("gas"));
  auto family = parse_family(j.at("family").get<std::string>());
  if (!family) throw Error(Errc::MalformedRow, "unknown family");
  r.family = *family;
  r.split = split_from(j.at("split"));
  auto mode = parse_range_mode(j.at("range_mode").get<std::string>());
  if (!mode) throw Error(Errc::MalformedRow, "unknown range mode");
  r.range_mode = *mode;
  r.fingerprint = j.at("fingerprint").get<std::string>();
  r.test_partition = j.at("test_partition").get<std::string>();
  r.train_rows = j.at("train_rows").get<std::size_t>();
  r.test_rows = j.at("test_rows").get<std::size_t>();
  for (const json& jr : j.at("rows")) {
    SweepRow row;
    row.config = jr.at("config").get<std::string>();
    row.params = config_from_json(r.family, jr.at("params"));
    if (jr.at("status") == "ok") {
      MetricReport m;
      m.r2 = metric_from(jr.at("r2"));
      m.rmse = metric_from(jr.at("rmse")).value_or(0.0);
      m.mae = metric_from(jr.at("mae")).value_or(0.0);
      m.nrmse_pct = metric_from(jr.at("nrmse_pct"));
      m.n = jr.at("n").get<std::size_t>();
      m.mode = r.range_mode;
      row.metrics = m;
    } else {
      row.error = jr.at("error").get<std::string>();
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

json curve_json(const ConvergenceCurve& c) {
  json points = json::array();
  for (const ConvergencePoint& p : c.points) {
    points.push_back({{"n_trees", p.n_trees}, {"r2", metric_json(p.r2)}});
  }
  return {{"kind", "convergence"},
          {"gas", gas_name(c.gas)},
          {"base", config_to_json(c.base)},
          {"split", split_json(c.split)},
          {"fingerprint", c.fingerprint},
          {"tolerance", c.tolerance},
          {"points", points},
          {"selected_n_trees", c.selected_n_trees}};
}

ConvergenceCurve curve_from(const json& j) {
  ConvergenceCurve c;
  c.gas = gas_from(j.at("gas"));
  c.base = std::get<ForestConfig>(config_from_json(Family::Forest, j.at("base")));
  c.split = split_from(j.at("split"));
  c.fingerprint = j.at("fingerprint").get<std::string>();
  c.tolerance = j.at("tolerance").get<double>();
  for (const json& p : j.at("points")) {
    c.points.push_back({p.at("n_trees").get<std::size_t>(), metric_from(p.at("r2"))});
  }
  c.selected_n_trees = j.at("selected_n_trees").get<std::size_t>();
  return c;
}

json table_json(const ComparisonTable& t) {
  json families = json::array();
  for (Family f : t.families) families.push_back(family_token(f));
  json rows = json::array();
  for (std::size_t g = 0; g < t.gases.size(); ++g) {
    json cells = json::array();
    for (std::size_t f = 0; f < t.families.size(); ++f) {
      const ComparisonCell& cell = t.cells[g][f];
      cells.push_back({{"r2", metric_json(cell.r2)}, {"config", cell.config}});
    }
    rows.push_back({{"gas", gas_name(t.gases[g])}, {"cells", cells}});
  }
  return {{"kind", "comparison"}, {"families", families}, {"rows", rows}};
}

ComparisonTable table_from(const json& j) {
  ComparisonTable t;
  for (const json& f : j.at("families")) {
    auto family = parse_family(f.get<std::string>());
    if (!family) throw Error(Errc::MalformedRow, "unknown family");
    t.families.push_back(*family);
  }
  for (const json& row : j.at("rows")) {
    t.gases.push_back(gas_from(row.at("gas")));
    std::vector<ComparisonCell> cells;
    for (const json& cell : row.at("cells")) {
      cells.push_back({metric_from(cell.at("r2")), cell.at("config").get<std::string>()});
    }
    if (cells.size() != t.families.size()) {
      throw Error(Errc::MalformedRow, "comparison row width differs from family count");
    }
    t.cells.push_back(std::move(cells));
  }
  return t;
}

std::string sweep_csv(const SweepReport& r) {
  std::ostringstream os;
  os << "config,r2,rmse,mae,nrmse_pct\n";
  for (const SweepRow& row : r.rows) {
    os << row.config;
    if (row.metrics) {
      os << ',' << format_metric(row.metrics->r2) << ',' << format_metric(row.metrics->rmse)
         << ',' << format_metric(row.metrics->mae) << ','
         << format_metric(row.metrics->nrmse_pct) << '\n';
    } else {
      os << ",undefined,undefined,undefined,undefined\n";
    }
  }
  return os.str();
}

std::string curve_csv(const ConvergenceCurve& c) {
  std::ostringstream os;
  os << "n_trees,r2,selected\n";
  for (const ConvergencePoint& p : c.points) {
    os << p.n_trees << ',' << format_metric(p.r2) << ','
       << (p.n_trees == c.selected_n_trees ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string table_csv(const ComparisonTable& t) {
  std::ostringstream os;
  os << "gas";
  for (Family f : t.families) os << ',' << family_label(f);
  os << '\n';
  for (std::size_t g = 0; g < t.gases.size(); ++g) {
    os << gas_name(t.gases[g]);
    for (const ComparisonCell& cell : t.cells[g]) os << ',' << format_metric(cell.r2);
    os << '\n';
  }
  return os.str();
}

}  // namespace

json report_to_json(const ReportDoc& doc) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SweepReport>) return sweep_json(d);
        else if constexpr (std::is_same_v<T, ComparisonTable>) return table_json(d);
        else return curve_json(d);
      },
      doc);
}

ReportDoc report_from_json(const json& doc) {
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "sweep") return sweep_from(doc);
    if (kind == "comparison") return table_from(doc);
    if (kind == "convergence") return curve_from(doc);
    throw Error(Errc::MalformedHeader, "unknown report kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedHeader, std::string("report document: ") + e.what());
  }
}

std::string emit_report(const ReportDoc& doc, ReportFormat format) {
  if (format == ReportFormat::Json) return report_to_json(doc).dump(2) + "\n";
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SweepReport>) return sweep_csv(d);
        else if constexpr (std::is_same_v<T, ComparisonTable>) return table_csv(d);
        else return curve_csv(d);
      },
      doc);
}

json sweep_sidecar(const SweepReport& report) {
  json runtimes = json::array();
  for (const SweepRow& row : report.rows) {
    runtimes.push_back({{"config", row.config}, {"runtime_s", row.runtime_s}});
  }
  json j{{"fingerprint", report.fingerprint},
         {"split", split_json(report.split)},
         {"library_version", EMISSIONSCOPE_VERSION},
         {"rows", runtimes}};
  if (report.split.strategy == SplitStrategy::Random) {
    j["caveat"] =
        "random split over 50%-overlapping windows: adjacent windows share samples, so test "
        "rows are not independent of training rows; use a chronological split for a "
        "leakage-free estimate";
  }
  return j;
}

}  // namespace emissionscope
