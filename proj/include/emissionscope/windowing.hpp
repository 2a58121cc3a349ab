#pragma once

#include <Eigen/Core>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emissionscope/gas.hpp"
#include "emissionscope/ingest.hpp"

namespace emissionscope {

struct WindowConfig {
  std::size_t window_len = 25;
  double overlap_fraction = 0.5;

  /// max(1, floor(window_len * (1 - overlap_fraction)))
  std::size_t stride() const;
  void validate() const;
};

/// Number of windows segment() yields for n samples (0 when n < window_len).
std::size_t window_count(std::size_t n, const WindowConfig& cfg);

/// A run of consecutive samples. Times are on the shared clock, i.e. the
/// series' epoch offset is already applied.
struct Window {
  std::size_t start_index = 0;
  double start_t = 0.0;
  double end_t = 0.0;
  std::span<const SensorSample> samples;

  double center_t() const { return 0.5 * (start_t + end_t); }
};

std::vector<Window> segment(const SensorSeries& series, const WindowConfig& cfg);

enum Feature : std::size_t {
  kMeanGyroZ,
  kMeanGyroX,
  kMeanAccelX,
  kMeanAccelY,
  kMeanAccelZ,
  kIqrAccelX,
  kPeakAccelX,
  kFeatureCount
};

using FeatureTuple = std::array<double, kFeatureCount>;

std::string_view feature_name(Feature feature) noexcept;

FeatureTuple extract_features(std::span<const SensorSample> samples);
inline FeatureTuple extract_features(const Window& window) {
  return extract_features(window.samples);
}

/// Quantile by linear interpolation between order statistics at h = (n-1)p.
/// `sorted` must be ascending and non-empty.
double interpolated_quantile(std::span<const double> sorted, double p);

enum class LabelMode { Nearest, WindowMean, Interpolate };

std::string_view label_mode_name(LabelMode mode) noexcept;
std::optional<LabelMode> parse_label_mode(std::string_view text) noexcept;

struct LabelPolicy {
  LabelMode mode = LabelMode::Nearest;
  double max_gap_s = 2.0;

  void validate() const;
};

struct WindowLabels {
  /// One entry per input window; meaningful only where kept[i] is true.
  std::vector<double> values;
  std::vector<bool> kept;
  std::size_t dropped = 0;
};

WindowLabels label_windows(std::span<const Window> windows, const EmissionSeries& emissions,
                           GasId gas, const LabelPolicy& policy);

/// Chooses which sensors (by position in the input list) and which of the
/// seven per-sensor features feed the dataset. Text form:
/// "<sensors>:<features>" with sensors "s1", "s2" or "s1+s2" and features
/// "all", "accel", "gyro" or a '+'-joined list of feature names. A bare
/// feature spec applies to every sensor.
struct ChannelMask {
  std::vector<std::size_t> sensors{0, 1};
  std::array<bool, kFeatureCount> features{true, true, true, true, true, true, true};

  static ChannelMask all(std::size_t sensor_count = 2);
  static ChannelMask accel_only(std::size_t sensor_count = 2);
  static ChannelMask parse(std::string_view text);
  std::string to_string() const;
  std::size_t features_per_sensor() const;
};

struct RowMeta {
  double window_start_t = 0.0;
  double window_center_t = 0.0;
};

struct Dataset {
  std::vector<std::string> feature_names;
  Eigen::MatrixXd X;
  std::map<GasId, Eigen::VectorXd> y;
  std::vector<RowMeta> rows;
  std::vector<std::string> sensor_ids;

  // Provenance echoed into the sidecar.
  WindowConfig window;
  LabelPolicy labels;
  ChannelMask mask;
  std::size_t windows_total = 0;
  std::size_t dropped = 0;

  std::size_t size() const { return static_cast<std::size_t>(X.rows()); }
  const Eigen::VectorXd& target(GasId gas) const;
  /// Rows in the given order, provenance kept.
  Dataset select(std::span<const std::size_t> indices) const;
  void validate() const;
};

Dataset build_dataset(std::span<const SensorSeries> sensors, const EmissionSeries& emissions,
                      const WindowConfig& cfg, const LabelPolicy& policy,
                      const ChannelMask& mask);

}  // namespace emissionscope
