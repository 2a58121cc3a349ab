#include "emissionscope/gas.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace emissionscope {

std::string_view gas_name(GasId gas) noexcept {
  switch (gas) {
    case GasId::NO: return "NO";
    case GasId::NO2: return "NO2";
    case GasId::NOX: return "NOX";
    case GasId::CO: return "CO";
    case GasId::CO2: return "CO2";
    case GasId::O2: return "O2";
    case GasId::SO2: return "SO2";
    case GasId::CH4: return "CH4";
    case GasId::H2S: return "H2S";
    case GasId::T_AIR: return "T_AIR";
    case GasId::T_GAS: return "T_GAS";
  }
  return "?";
}

std::string_view gas_token(GasId gas) noexcept {
  switch (gas) {
    case GasId::NO: return "no";
    case GasId::NO2: return "no2";
    case GasId::NOX: return "nox";
    case GasId::CO: return "co";
    case GasId::CO2: return "co2";
    case GasId::O2: return "o2";
    case GasId::SO2: return "so2";
    case GasId::CH4: return "ch4";
    case GasId::H2S: return "h2s";
    case GasId::T_AIR: return "t_air";
    case GasId::T_GAS: return "t_gas";
  }
  return "?";
}

std::optional<GasId> parse_gas(std::string_view text) noexcept {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (GasId gas : kAllGases) {
    if (lower == gas_token(gas)) return gas;
  }
  return std::nullopt;
}

Unit gas_unit(GasId gas) noexcept {
  switch (gas) {
    case GasId::CO2:
    case GasId::O2: return Unit::Percent;
    case GasId::T_AIR:
    case GasId::T_GAS: return Unit::Celsius;
    default: return Unit::Ppm;
  }
}

std::string_view unit_name(Unit unit) noexcept {
  switch (unit) {
    case Unit::Ppm: return "ppm";
    case Unit::Percent: return "percent";
    case Unit::Celsius: return "celsius";
  }
  return "?";
}

// Analyzer full-scale ranges. CO has no published range for this analyzer
// family in our reference sheet; 0-8000 ppm is the usual electrochemical cell.
AnalyzerRange analyzer_range(GasId gas) noexcept {
  switch (gas) {
    case GasId::NO: return {0.0, 5000.0};
    case GasId::NO2: return {0.0, 1000.0};
    case GasId::NOX: return {0.0, 6000.0};
    case GasId::CO: return {0.0, 8000.0};
    case GasId::CO2: return {0.0, 50.0};
    case GasId::O2: return {0.0, 25.0};
    case GasId::SO2: return {0.0, 5000.0};
    case GasId::CH4: return {0.0, 50000.0};
    case GasId::H2S: return {0.0, 500.0};
    case GasId::T_AIR: return {-20.0, 120.0};
    case GasId::T_GAS: return {-20.0, 1250.0};
  }
  return {0.0, 0.0};
}

bool is_modeled(GasId gas) noexcept {
  return std::find(kModeledGases.begin(), kModeledGases.end(), gas) !=
         kModeledGases.end();
}

}  // namespace emissionscope
