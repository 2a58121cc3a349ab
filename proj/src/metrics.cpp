#include "emissionscope/metrics.hpp"

#include <cmath>

#include "emissionscope/csv.hpp"
#include "emissionscope/error.hpp"

namespace emissionscope {

std::string_view range_mode_name(RangeMode mode) noexcept {
  return mode == RangeMode::PredictedRange ? "predicted_range" : "actual_range";
}

std::optional<RangeMode> parse_range_mode(std::string_view text) noexcept {
  if (text == "predicted_range" || text == "predicted") return RangeMode::PredictedRange;
  if (text == "actual_range" || text == "actual") return RangeMode::ActualRange;
  return std::nullopt;
}

MetricReport compute_metrics(const Eigen::VectorXd& actual, const Eigen::VectorXd& predicted,
                             RangeMode mode) {
  if (actual.size() != predicted.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(actual.size()) + " actual vs " +
                                          std::to_string(predicted.size()) + " predicted");
  }
  if (actual.size() < 2) throw Error(Errc::TooFewRows, "metrics need at least 2 samples");
  if (!actual.allFinite() || !predicted.allFinite()) {
    throw Error(Errc::NonFiniteInput, "metric inputs must be finite");
  }
  const auto n = static_cast<double>(actual.size());
  const Eigen::ArrayXd err = actual.array() - predicted.array();
  const double ss_res = err.square().sum();

  MetricReport report;
  report.n = static_cast<std::size_t>(actual.size());
  report.mode = mode;
  report.rmse = std::sqrt(ss_res / n);
  report.mae = err.abs().sum() / n;

  const double mean = actual.mean();
  const double ss_tot = (actual.array() - mean).square().sum();
  if (ss_tot > 0.0) report.r2 = 1.0 - ss_res / ss_tot;

  const Eigen::VectorXd& ranged = mode == RangeMode::PredictedRange ? predicted : actual;
  const double range = ranged.maxCoeff() - ranged.minCoeff();
  if (range > 0.0) report.nrmse_pct = report.rmse / range * 100.0;
  return report;
}

std::string format_metric(const std::optional<double>& value) {
  return value ? csv::format_sig6(*value) : std::string("undefined");
}

}  // namespace emissionscope
