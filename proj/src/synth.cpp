#include "emissionscope/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "emissionscope/error.hpp"
#include "emissionscope/rng.hpp"

namespace emissionscope {

std::string_view activity_name(Activity a) noexcept {
  switch (a) {
    case Activity::Idle: return "idle";
    case Activity::Dig: return "dig";
    case Activity::Swing: return "swing";
    case Activity::Dump: return "dump";
  }
  return "?";
}

std::optional<Activity> parse_activity(std::string_view text) noexcept {
  for (Activity a : {Activity::Idle, Activity::Dig, Activity::Swing, Activity::Dump}) {
    if (text == activity_name(a)) return a;
  }
  return std::nullopt;
}

SynthConfig SynthConfig::defaults() {
  SynthConfig cfg;
  // Frequencies are multiples of 4 Hz, so a 25-sample window at 100 Hz spans
  // whole periods and its mean is the axis offset.
  cfg.cycle = {{Activity::Idle, 10.0}, {Activity::Dig, 8.0}, {Activity::Swing, 6.0},
               {Activity::Dump, 4.0}};
  for (std::size_t s = 0; s < kActivityCount; ++s) {
    const double k = static_cast<double>(s);
    MotionProfile& m = cfg.motion[s];
    m.accel[0] = {0.05 + 0.10 * k, 0.05 + 0.15 * k, 8.0};
    m.accel[1] = {0.02 + 0.05 * k, 0.03 + 0.10 * k, 4.0};
    m.accel[2] = {1.00 + 0.03 * k, 0.02 + 0.08 * k, 12.0};
    m.gyro[0] = {0.5 + 2.0 * k, 1.0 + 4.0 * k, 4.0};
    m.gyro[1] = {0.3 + 1.5 * k, 1.0 + 3.0 * k, 8.0};
    m.gyro[2] = {1.0 + 5.0 * k, 2.0 + 8.0 * k, 4.0};
  }
  //                          idle  dig   swing dump
  cfg.gases[GasId::CO] = {40.0, {1.0, 5.0, 6.5, 1.8}};
  cfg.gases[GasId::NO] = {100.0, {1.0, 4.5, 6.0, 2.0}};
  cfg.gases[GasId::NO2] = {5.0, {1.0, 5.0, 6.0, 1.5}};
  cfg.gases[GasId::CO2] = {2.0, {1.0, 3.5, 4.5, 1.6}};
  cfg.gases[GasId::O2] = {18.0, {1.0, 0.90, 0.85, 0.95}};
  cfg.gases[GasId::SO2] = {2.0, {1.0, 2.0, 2.5, 1.2}};
  cfg.gases[GasId::CH4] = {20.0, {1.0, 1.5, 1.8, 1.1}};
  cfg.gases[GasId::H2S] = {1.0, {1.0, 1.0, 1.0, 1.0}};
  cfg.gases[GasId::T_AIR] = {25.0, {1.0, 1.0, 1.0, 1.0}};
  cfg.gases[GasId::T_GAS] = {150.0, {1.0, 1.6, 1.8, 1.2}};
  return cfg;
}

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidConfig, what); };
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) fail("duration must be positive");
  if (!(rate_hz > 0.0) || !(pems_rate_hz > 0.0)) fail("rates must be positive");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) fail("noise_std must be non-negative");
  if (!(cabin_attenuation >= 0.0)) fail("cabin attenuation must be non-negative");
  if (cycle.empty()) fail("activity cycle is empty");
  for (const Dwell& d : cycle) {
    if (!(d.dwell_s > 0.0) || !std::isfinite(d.dwell_s)) fail("dwell times must be positive");
  }
  for (GasId required : {GasId::NO, GasId::NO2, GasId::CO, GasId::CO2, GasId::O2}) {
    if (!gases.count(required)) {
      fail("synthetic PEMS stream needs a profile for " + std::string(gas_name(required)));
    }
  }
  if (gases.count(GasId::NOX)) fail("NOX is derived, not generated");
}

Activity GroundTruth::state_at(double t) const {
  const auto it = std::upper_bound(timeline.begin(), timeline.end(), t,
                                   [](double v, const StateInterval& s) { return v < s.start_t; });
  if (it == timeline.begin()) return timeline.front().state;
  return std::prev(it)->state;
}

double GroundTruth::emission_at(GasId gas, double t) const {
  const Activity s = state_at(t);
  if (gas == GasId::NOX) return emission_at(GasId::NO, t) + emission_at(GasId::NO2, t);
  const GasProfile& p = gases.at(gas);
  return p.base * p.multiplier[static_cast<std::size_t>(s)];
}

namespace {

// Noise streams, one per channel group, so adding a gas leaves the inertial
// draws untouched.
enum Stream : std::uint64_t { kCabinStream = 1, kStickStream = 2, kGasStreamBase = 16 };

double axis_value(const AxisMotion& m, double scale, double phase, double t) {
  return m.offset + scale * m.amplitude * std::sin(2.0 * std::numbers::pi * m.freq_hz * t + phase);
}

SensorSeries motion_stream(const SynthConfig& cfg, const GroundTruth& truth, std::size_t n,
                           std::string id, double scale, double phase_shift,
                           std::uint64_t stream) {
  SensorSeries s;
  s.sensor_id = std::move(id);
  s.rate_hz = cfg.rate_hz;
  s.samples.reserve(n);
  Rng rng(child_seed(cfg.seed, stream));
  const double accel_sd = cfg.noise_std;
  const double gyro_sd = 10.0 * cfg.noise_std;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / cfg.rate_hz;
    const MotionProfile& m = cfg.motion[static_cast<std::size_t>(truth.state_at(t))];
    SensorSample x;
    x.t = t;
    double* accel[3] = {&x.accel_x, &x.accel_y, &x.accel_z};
    double* gyro[3] = {&x.gyro_x, &x.gyro_y, &x.gyro_z};
    for (std::size_t a = 0; a < 3; ++a) {
      const double phase = phase_shift + 0.7 * static_cast<double>(a);
      *accel[a] = axis_value(m.accel[a], scale, phase, t);
      *gyro[a] = axis_value(m.gyro[a], scale, phase + 0.3, t);
      if (cfg.noise_std > 0.0) {
        *accel[a] += accel_sd * rng.normal();
        *gyro[a] += gyro_sd * rng.normal();
      }
      *accel[a] = std::clamp(*accel[a], -kAccelFullScaleG, kAccelFullScaleG);
      *gyro[a] = std::clamp(*gyro[a], -kGyroFullScaleDps, kGyroFullScaleDps);
    }
    s.samples.push_back(x);
  }
  return s;
}

}  // namespace

SynthOutput generate(const SynthConfig& cfg) {
  cfg.validate();
  SynthOutput out;
  GroundTruth& truth = out.truth;
  truth.gases = cfg.gases;

  for (double t = 0.0; t < cfg.duration_s;) {
    for (const Dwell& d : cfg.cycle) {
      if (t >= cfg.duration_s) break;
      const double end = std::min(t + d.dwell_s, cfg.duration_s);
      truth.timeline.push_back({t, end, d.state});
      t = end;
    }
  }

  const auto n = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.rate_hz));
  if (n < 1) throw Error(Errc::InvalidConfig, "duration shorter than one sample");
  out.cabin = motion_stream(cfg, truth, n, "s1", cfg.cabin_attenuation, 0.0, kCabinStream);
  out.stick = motion_stream(cfg, truth, n, "s2", 1.0, 1.1, kStickStream);

  const auto records =
      static_cast<std::size_t>(std::floor(cfg.duration_s * cfg.pems_rate_hz + 1e-9)) + 1;
  for (std::size_t j = 0; j < records; ++j) {
    truth.record_t.push_back(static_cast<double>(j) / cfg.pems_rate_hz);
  }

  EmissionSeries& pems = out.pems;
  pems.records.resize(records);
  for (std::size_t j = 0; j < records; ++j) pems.records[j].t = truth.record_t[j];
  for (const auto& [gas, profile] : cfg.gases) {
    pems.gases.insert(gas);
    Rng rng(child_seed(cfg.seed, kGasStreamBase + static_cast<std::uint64_t>(gas)));
    const AnalyzerRange range = analyzer_range(gas);
    std::vector<double>& clean = truth.noiseless[gas];
    clean.reserve(records);
    for (std::size_t j = 0; j < records; ++j) {
      const double value = truth.emission_at(gas, truth.record_t[j]);
      clean.push_back(value);
      double observed = value;
      if (cfg.noise_std > 0.0) observed += cfg.noise_std * profile.base * rng.normal();
      observed = std::clamp(observed, range.lo, range.hi);
      pems.records[j].values[gas] = Reading{observed, gas_unit(gas)};
    }
  }
  return out;
}

std::vector<WindowTruth> truth_for_windows(const GroundTruth& truth,
                                           std::span<const Window> windows) {
  std::vector<WindowTruth> out;
  out.reserve(windows.size());
  for (const Window& w : windows) {
    WindowTruth wt;
    wt.state = truth.state_at(w.center_t());
    for (const auto& [gas, profile] : truth.gases) wt.emission[gas] = truth.emission_at(gas, w.center_t());
    if (truth.gases.count(GasId::NO) && truth.gases.count(GasId::NO2)) {
      wt.emission[GasId::NOX] = truth.emission_at(GasId::NOX, w.center_t());
    }
    out.push_back(std::move(wt));
  }
  return out;
}

nlohmann::json truth_to_json(const GroundTruth& truth) {
  nlohmann::json timeline = nlohmann::json::array();
  for (const StateInterval& s : truth.timeline) {
    timeline.push_back({{"start_t", s.start_t}, {"end_t", s.end_t}, {"state", activity_name(s.state)}});
  }
  nlohmann::json gases = nlohmann::json::object();
  for (const auto& [gas, profile] : truth.gases) {
    gases[std::string(gas_name(gas))] = {{"base", profile.base},
                                         {"multiplier", profile.multiplier}};
  }
  nlohmann::json noiseless = nlohmann::json::object();
  for (const auto& [gas, values] : truth.noiseless) noiseless[std::string(gas_name(gas))] = values;
  return {{"timeline", timeline},
          {"record_t", truth.record_t},
          {"gases", gases},
          {"noiseless", noiseless}};
}

}  // namespace emissionscope
