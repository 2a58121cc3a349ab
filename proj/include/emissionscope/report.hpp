#pragma once

#include <json.hpp>
#include <string>
#include <string_view>
#include <variant>

#include "emissionscope/experiment.hpp"

namespace emissionscope {

enum class ReportFormat { Csv, Json };

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept;

using ReportDoc = std::variant<SweepReport, ComparisonTable, ConvergenceCurve>;

/// Deterministic bytes: sorted JSON keys, six significant digits, and
/// "undefined" for undefined metrics. Sweep CSV columns are
/// config,r2,rmse,mae,nrmse_pct.
std::string emit_report(const ReportDoc& doc, ReportFormat format);

nlohmann::json report_to_json(const ReportDoc& doc);
ReportDoc report_from_json(const nlohmann::json& doc);

/// Run metadata that is allowed to vary between runs (wall-clock times).
nlohmann::json sweep_sidecar(const SweepReport& report);

/// Value rounded to six significant digits.
double round_sig6(double value);

}  // namespace emissionscope
