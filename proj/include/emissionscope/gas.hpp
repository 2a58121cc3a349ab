#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace emissionscope {

enum class GasId { NO, NO2, NOX, CO, CO2, O2, SO2, CH4, H2S, T_AIR, T_GAS };

enum class Unit { Ppm, Percent, Celsius };

inline constexpr std::array<GasId, 11> kAllGases = {
    GasId::NO,  GasId::NO2, GasId::NOX, GasId::CO,  GasId::CO2,   GasId::O2,
    GasId::SO2, GasId::CH4, GasId::H2S, GasId::T_AIR, GasId::T_GAS};

/// Gases that become regression targets, in dataset column order.
inline constexpr std::array<GasId, 5> kModeledGases = {
    GasId::CO, GasId::NO, GasId::NO2, GasId::NOX, GasId::CO2};

struct AnalyzerRange {
  double lo;
  double hi;
};

/// Canonical upper-case name ("CO2", "T_AIR").
std::string_view gas_name(GasId gas) noexcept;
/// Lower-case token used in CLI flags and dataset target columns ("co2").
std::string_view gas_token(GasId gas) noexcept;
/// Case-insensitive parse of either form.
std::optional<GasId> parse_gas(std::string_view text) noexcept;

Unit gas_unit(GasId gas) noexcept;
std::string_view unit_name(Unit unit) noexcept;
AnalyzerRange analyzer_range(GasId gas) noexcept;
bool is_modeled(GasId gas) noexcept;

}  // namespace emissionscope
