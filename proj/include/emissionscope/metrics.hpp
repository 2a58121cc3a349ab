#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace emissionscope {

/// Which range normalizes RMSE into NRMSE.
enum class RangeMode { PredictedRange, ActualRange };

std::string_view range_mode_name(RangeMode mode) noexcept;
std::optional<RangeMode> parse_range_mode(std::string_view text) noexcept;

/// Undefined metrics are empty optionals: r2 when the actual values have zero
/// variance, nrmse_pct when the normalizing range is zero.
struct MetricReport {
  std::optional<double> r2;
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> nrmse_pct;
  std::size_t n = 0;
  RangeMode mode = RangeMode::PredictedRange;
};

/// R^2 = 1 - SS_res / SS_tot about the mean of `actual`; RMSE; MAE;
/// NRMSE = RMSE / (max - min) * 100 over the range selected by `mode`.
MetricReport compute_metrics(const Eigen::VectorXd& actual, const Eigen::VectorXd& predicted,
                             RangeMode mode = RangeMode::PredictedRange);

/// "undefined" for empty values, six significant digits otherwise.
std::string format_metric(const std::optional<double>& value);

}  // namespace emissionscope
