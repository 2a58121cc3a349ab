#include "emissionscope/ingest.hpp"

#include <array>
#include <cmath>
#include <string>

#include "emissionscope/csv.hpp"
#include "emissionscope/error.hpp"

namespace emissionscope {
namespace {

constexpr std::array<GasId, 10> kPemsColumns = {
    GasId::NO,  GasId::NO2, GasId::CO,  GasId::CO2,   GasId::O2,
    GasId::SO2, GasId::CH4, GasId::H2S, GasId::T_AIR, GasId::T_GAS};
// t_s plus no, no2, co, co2, o2 are mandatory.
constexpr std::size_t kPemsRequiredFields = 6;

constexpr std::string_view kEpochPrefix = "#epoch_offset_s=";

std::string row_context(std::size_t line_no) {
  return "line " + std::to_string(line_no);
}

// Reads the optional epoch line and the header. Returns the header line.
std::string read_preamble(std::istream& in, double& epoch_offset,
                          std::size_t& line_no) {
  std::string line;
  if (!csv::read_line(in, line)) {
    throw Error(Errc::MalformedHeader, "missing header");
  }
  ++line_no;
  if (line.rfind(kEpochPrefix, 0) == 0) {
    auto value = csv::parse_double(std::string_view(line).substr(kEpochPrefix.size()));
    if (!value) throw Error(Errc::MalformedHeader, "bad epoch offset: " + line);
    epoch_offset = *value;
    if (!csv::read_line(in, line)) {
      throw Error(Errc::MalformedHeader, "missing header");
    }
    ++line_no;
  }
  return line;
}

// Data rows with trailing blank lines removed; interior blank lines are kept
// so they fail as malformed rows.
std::vector<std::string> read_rows(std::istream& in) {
  std::vector<std::string> rows;
  std::string line;
  while (csv::read_line(in, line)) rows.push_back(line);
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  return rows;
}

double field_value(std::string_view field, std::size_t line_no,
                   std::string_view column) {
  auto value = csv::parse_double(field);
  if (!value) {
    throw Error(Errc::MalformedRow, row_context(line_no) + ": column " +
                                        std::string(column) + " value '" +
                                        std::string(field) + "' is not a finite number");
  }
  return *value;
}

void check_time(double t, double prev_t, bool first, std::size_t line_no) {
  if (t < 0.0) {
    throw Error(Errc::RangeViolation,
                row_context(line_no) + ": negative timestamp " + csv::format_exact(t));
  }
  if (!first && !(t > prev_t)) {
    throw Error(Errc::NonMonotonicTime,
                row_context(line_no) + ": t=" + csv::format_exact(t) +
                    " does not follow t=" + csv::format_exact(prev_t));
  }
}

void check_range(double value, double limit, std::string_view column,
                 std::size_t line_no) {
  if (std::abs(value) > limit) {
    throw Error(Errc::RangeViolation, row_context(line_no) + ": " + std::string(column) +
                                          "=" + csv::format_exact(value) +
                                          " outside +/-" + csv::format_exact(limit));
  }
}

void check_gas_range(GasId gas, double value, std::size_t line_no) {
  const AnalyzerRange range = analyzer_range(gas);
  if (value < range.lo || value > range.hi) {
    throw Error(Errc::RangeViolation,
                row_context(line_no) + ": " + std::string(gas_name(gas)) + "=" +
                    csv::format_exact(value) + " outside [" + csv::format_exact(range.lo) +
                    ", " + csv::format_exact(range.hi) + "] " +
                    std::string(unit_name(gas_unit(gas))));
  }
}

void check_interval(double dt, double rate_hz, std::size_t line_no) {
  const double period = 1.0 / rate_hz;
  if (std::abs(dt - period) > kSamplingJitter * period) {
    throw Error(Errc::SamplingGap, row_context(line_no) + ": interval " +
                                       csv::format_exact(dt) + " s deviates from " +
                                       csv::format_exact(period) + " s by more than 20%");
  }
}

}  // namespace

SensorSeries parse_inertial_csv(std::istream& in, std::string sensor_id, double rate_hz) {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw Error(Errc::InvalidConfig, "sampling rate must be positive");
  }
  SensorSeries series;
  series.sensor_id = std::move(sensor_id);
  series.rate_hz = rate_hz;

  std::size_t line_no = 0;
  const std::string header = read_preamble(in, series.epoch_offset_s, line_no);
  if (header != kInertialHeader) {
    throw Error(Errc::MalformedHeader, "expected '" + std::string(kInertialHeader) +
                                           "', got '" + header + "'");
  }
  static const std::array<std::string_view, 7> columns = {
      "t_s", "accel_x_g", "accel_y_g", "accel_z_g", "gyro_x_dps", "gyro_y_dps", "gyro_z_dps"};

  const std::vector<std::string> rows = read_rows(in);
  if (rows.empty()) throw Error(Errc::EmptyStream, "no samples after header");
  series.samples.reserve(rows.size());

  for (const std::string& row : rows) {
    ++line_no;
    const auto fields = csv::split(row);
    if (fields.size() != columns.size()) {
      throw Error(Errc::MalformedRow, row_context(line_no) + ": expected 7 fields, got " +
                                          std::to_string(fields.size()));
    }
    std::array<double, 7> v{};
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = field_value(fields[i], line_no, columns[i]);
    for (std::size_t i = 1; i <= 3; ++i) check_range(v[i], kAccelFullScaleG, columns[i], line_no);
    for (std::size_t i = 4; i <= 6; ++i) check_range(v[i], kGyroFullScaleDps, columns[i], line_no);

    const bool first = series.samples.empty();
    const double prev_t = first ? 0.0 : series.samples.back().t;
    check_time(v[0], prev_t, first, line_no);
    if (!first) check_interval(v[0] - prev_t, rate_hz, line_no);
    series.samples.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return series;
}

void write_inertial_csv(std::ostream& out, const SensorSeries& series) {
  if (series.epoch_offset_s != 0.0) {
    out << kEpochPrefix << csv::format_exact(series.epoch_offset_s) << '\n';
  }
  out << kInertialHeader << '\n';
  for (const SensorSample& s : series.samples) {
    out << csv::format_exact(s.t) << ',' << csv::format_exact(s.accel_x) << ','
        << csv::format_exact(s.accel_y) << ',' << csv::format_exact(s.accel_z) << ','
        << csv::format_exact(s.gyro_x) << ',' << csv::format_exact(s.gyro_y) << ','
        << csv::format_exact(s.gyro_z) << '\n';
  }
}

EmissionSeries parse_pems_csv(std::istream& in) {
  EmissionSeries series;
  std::size_t line_no = 0;
  const std::string header = read_preamble(in, series.epoch_offset_s, line_no);

  const auto names = csv::split(header);
  const auto expected = csv::split(kPemsHeader);
  if (names.size() < kPemsRequiredFields || names.size() > expected.size()) {
    throw Error(Errc::MalformedHeader,
                "PEMS header must start with t_s,no_ppm,no2_ppm,co_ppm,co2_pct,o2_pct; got '" +
                    header + "'");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] != expected[i]) {
      throw Error(Errc::MalformedHeader, "column " + std::to_string(i + 1) + " should be '" +
                                             std::string(expected[i]) + "', got '" +
                                             std::string(names[i]) + "'");
    }
  }
  const std::size_t gas_count = names.size() - 1;
  for (std::size_t g = 0; g < gas_count; ++g) series.gases.insert(kPemsColumns[g]);

  const std::vector<std::string> rows = read_rows(in);
  if (rows.empty()) throw Error(Errc::EmptyStream, "no records after header");
  series.records.reserve(rows.size());

  for (const std::string& row : rows) {
    ++line_no;
    const auto fields = csv::split(row);
    if (fields.size() != names.size()) {
      throw Error(Errc::MalformedRow, row_context(line_no) + ": expected " +
                                          std::to_string(names.size()) + " fields, got " +
                                          std::to_string(fields.size()));
    }
    EmissionRecord record;
    record.t = field_value(fields[0], line_no, names[0]);
    const bool first = series.records.empty();
    check_time(record.t, first ? 0.0 : series.records.back().t, first, line_no);
    for (std::size_t g = 0; g < gas_count; ++g) {
      const GasId gas = kPemsColumns[g];
      const double value = field_value(fields[g + 1], line_no, names[g + 1]);
      check_gas_range(gas, value, line_no);
      record.values.emplace(gas, Reading{value, gas_unit(gas)});
    }
    series.records.push_back(std::move(record));
  }
  return series;
}

void write_pems_csv(std::ostream& out, const EmissionSeries& series) {
  std::size_t gas_count = 0;
  for (std::size_t g = 0; g < kPemsColumns.size(); ++g) {
    if (series.has(kPemsColumns[g])) gas_count = g + 1;
  }
  if (gas_count < kPemsRequiredFields - 1) {
    throw Error(Errc::MissingChannel, "PEMS output needs NO, NO2, CO, CO2 and O2");
  }
  for (std::size_t g = 0; g < gas_count; ++g) {
    if (!series.has(kPemsColumns[g])) {
      throw Error(Errc::MissingChannel, "PEMS columns must form a schema prefix; missing " +
                                            std::string(gas_name(kPemsColumns[g])));
    }
  }
  if (series.epoch_offset_s != 0.0) {
    out << kEpochPrefix << csv::format_exact(series.epoch_offset_s) << '\n';
  }
  const auto names = csv::split(kPemsHeader);
  for (std::size_t i = 0; i <= gas_count; ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  for (const EmissionRecord& record : series.records) {
    out << csv::format_exact(record.t);
    for (std::size_t g = 0; g < gas_count; ++g) {
      out << ',' << csv::format_exact(record.values.at(kPemsColumns[g]).magnitude);
    }
    out << '\n';
  }
}

EmissionSeries derive_nox(const EmissionSeries& series) {
  for (GasId gas : {GasId::NO, GasId::NO2}) {
    if (!series.has(gas)) {
      throw Error(Errc::MissingChannel,
                  "NOX needs " + std::string(gas_name(gas)) + " but the series lacks it");
    }
  }
  EmissionSeries out = series;
  out.gases.insert(GasId::NOX);
  for (EmissionRecord& record : out.records) {
    const Reading& no = record.values.at(GasId::NO);
    const Reading& no2 = record.values.at(GasId::NO2);
    if (no.unit != Unit::Ppm || no2.unit != Unit::Ppm) {
      throw Error(Errc::UnitMismatch, "NO and NO2 must both be ppm at t=" +
                                          csv::format_exact(record.t));
    }
    record.values[GasId::NOX] = Reading{no.magnitude + no2.magnitude, Unit::Ppm};
  }
  return out;
}

void validate(const SensorSeries& series) {
  if (series.samples.empty()) throw Error(Errc::EmptyStream, "sensor series is empty");
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const SensorSample& s = series.samples[i];
    const std::size_t row = i + 2;
    if (!std::isfinite(s.t)) throw Error(Errc::MalformedRow, row_context(row) + ": t not finite");
    for (double a : {s.accel_x, s.accel_y, s.accel_z}) {
      if (!std::isfinite(a)) throw Error(Errc::MalformedRow, row_context(row) + ": accel");
      check_range(a, kAccelFullScaleG, "accel", row);
    }
    for (double g : {s.gyro_x, s.gyro_y, s.gyro_z}) {
      if (!std::isfinite(g)) throw Error(Errc::MalformedRow, row_context(row) + ": gyro");
      check_range(g, kGyroFullScaleDps, "gyro", row);
    }
    const double prev_t = i ? series.samples[i - 1].t : 0.0;
    check_time(s.t, prev_t, i == 0, row);
    if (i) check_interval(s.t - prev_t, series.rate_hz, row);
  }
}

void validate(const EmissionSeries& series) {
  if (series.records.empty()) throw Error(Errc::EmptyStream, "emission series is empty");
  for (std::size_t i = 0; i < series.records.size(); ++i) {
    const EmissionRecord& r = series.records[i];
    const std::size_t row = i + 2;
    check_time(r.t, i ? series.records[i - 1].t : 0.0, i == 0, row);
    if (r.values.size() != series.gases.size()) {
      throw Error(Errc::MissingChannel, row_context(row) + ": gas set differs from series");
    }
    for (const auto& [gas, reading] : r.values) {
      if (!series.has(gas)) {
        throw Error(Errc::MissingChannel, row_context(row) + ": unexpected gas " +
                                              std::string(gas_name(gas)));
      }
      if (!std::isfinite(reading.magnitude)) {
        throw Error(Errc::MalformedRow, row_context(row) + ": non-finite reading");
      }
      if (reading.unit != gas_unit(gas)) {
        throw Error(Errc::UnitMismatch, row_context(row) + ": " + std::string(gas_name(gas)) +
                                            " in " + std::string(unit_name(reading.unit)));
      }
      check_gas_range(gas, reading.magnitude, row);
    }
  }
}

}  // namespace emissionscope
