#pragma once

#include <array>
#include <cstdint>
#include <json.hpp>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "emissionscope/gas.hpp"
#include "emissionscope/ingest.hpp"
#include "emissionscope/windowing.hpp"

namespace emissionscope {

enum class Activity { Idle, Dig, Swing, Dump };
inline constexpr std::size_t kActivityCount = 4;

std::string_view activity_name(Activity a) noexcept;
std::optional<Activity> parse_activity(std::string_view text) noexcept;

struct Dwell {
  Activity state = Activity::Idle;
  double dwell_s = 1.0;
};

/// Per-axis sinusoid: offset + amplitude * sin(2 pi freq t + phase).
struct AxisMotion {
  double offset = 0.0;
  double amplitude = 0.0;
  double freq_hz = 1.0;
};

/// Stick-sensor motion for one activity, axes ordered x, y, z.
struct MotionProfile {
  std::array<AxisMotion, 3> accel;
  std::array<AxisMotion, 3> gyro;
};

struct GasProfile {
  double base = 0.0;
  std::array<double, kActivityCount> multiplier{1.0, 1.0, 1.0, 1.0};
};

struct SynthConfig {
  double duration_s = 600.0;
  double rate_hz = 100.0;
  double pems_rate_hz = 1.0;
  std::vector<Dwell> cycle;
  std::array<MotionProfile, kActivityCount> motion;
  /// Cabin amplitudes are the stick's scaled by this factor.
  double cabin_attenuation = 0.3;
  std::map<GasId, GasProfile> gases;
  /// Noise scale: inertial noise sd is noise_std g (accel) and 10*noise_std
  /// deg/s (gyro); emission noise sd is noise_std times the gas base level.
  double noise_std = 0.1;
  std::uint64_t seed = 0;

  /// Four-state idle/dig/swing/dump cycle. Motion intensity grows with the
  /// state index while emission multipliers do not, so the label is a
  /// non-monotone function of the features.
  static SynthConfig defaults();
  void validate() const;
};

struct StateInterval {
  double start_t = 0.0;
  double end_t = 0.0;
  Activity state = Activity::Idle;
};

struct GroundTruth {
  std::vector<StateInterval> timeline;
  std::vector<double> record_t;
  std::map<GasId, std::vector<double>> noiseless;  // one value per record
  std::map<GasId, GasProfile> gases;

  Activity state_at(double t) const;
  double emission_at(GasId gas, double t) const;
};

struct WindowTruth {
  Activity state = Activity::Idle;
  std::map<GasId, double> emission;  // noiseless, at the window center
};

struct SynthOutput {
  SensorSeries cabin;  // sensor s1
  SensorSeries stick;  // sensor s2
  EmissionSeries pems;
  GroundTruth truth;
};

SynthOutput generate(const SynthConfig& cfg);

std::vector<WindowTruth> truth_for_windows(const GroundTruth& truth,
                                           std::span<const Window> windows);

nlohmann::json truth_to_json(const GroundTruth& truth);

}  // namespace emissionscope
