#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "emissionscope/gas.hpp"

namespace emissionscope {

inline constexpr double kAccelFullScaleG = 200.0;
inline constexpr double kGyroFullScaleDps = 7000.0;
/// Allowed deviation of a sample interval from the nominal period.
inline constexpr double kSamplingJitter = 0.2;

inline constexpr std::string_view kInertialHeader =
    "t_s,accel_x_g,accel_y_g,accel_z_g,gyro_x_dps,gyro_y_dps,gyro_z_dps";
inline constexpr std::string_view kPemsHeader =
    "t_s,no_ppm,no2_ppm,co_ppm,co2_pct,o2_pct,so2_ppm,ch4_ppm,h2s_ppm,t_air_c,t_gas_c";

struct SensorSample {
  double t = 0.0;
  double accel_x = 0.0;
  double accel_y = 0.0;
  double accel_z = 0.0;
  double gyro_x = 0.0;
  double gyro_y = 0.0;
  double gyro_z = 0.0;

  bool operator==(const SensorSample&) const = default;
};

struct SensorSeries {
  std::string sensor_id;
  double rate_hz = 100.0;
  /// Seconds to add to every t to place the stream on a shared clock.
  double epoch_offset_s = 0.0;
  std::vector<SensorSample> samples;

  bool operator==(const SensorSeries&) const = default;
};

struct Reading {
  double magnitude = 0.0;
  Unit unit = Unit::Ppm;

  bool operator==(const Reading&) const = default;
};

struct EmissionRecord {
  double t = 0.0;
  std::map<GasId, Reading> values;

  bool operator==(const EmissionRecord&) const = default;
};

struct EmissionSeries {
  double epoch_offset_s = 0.0;
  std::vector<EmissionRecord> records;
  std::set<GasId> gases;

  bool has(GasId gas) const { return gases.count(gas) != 0; }
  bool operator==(const EmissionSeries&) const = default;
};

/// Files may open with an optional "#epoch_offset_s=<seconds>" line before the
/// header. Any validation failure throws emissionscope::Error.
SensorSeries parse_inertial_csv(std::istream& in, std::string sensor_id,
                                double rate_hz = 100.0);
void write_inertial_csv(std::ostream& out, const SensorSeries& series);

EmissionSeries parse_pems_csv(std::istream& in);
void write_pems_csv(std::ostream& out, const EmissionSeries& series);

/// Returns a copy carrying NOX = NO + NO2 (ppm) on every record.
EmissionSeries derive_nox(const EmissionSeries& series);

/// Throws if the series breaks any SensorSeries invariant.
void validate(const SensorSeries& series);
void validate(const EmissionSeries& series);

}  // namespace emissionscope
