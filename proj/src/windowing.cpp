#include "emissionscope/windowing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "emissionscope/csv.hpp"
#include "emissionscope/error.hpp"
#include "emissionscope/parallel.hpp"

namespace emissionscope {

std::size_t WindowConfig::stride() const {
  const double raw = std::floor(static_cast<double>(window_len) * (1.0 - overlap_fraction));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(raw, 0.0)));
}

void WindowConfig::validate() const {
  if (window_len < 1) throw Error(Errc::InvalidConfig, "window length must be at least 1");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw Error(Errc::InvalidConfig, "overlap fraction must be in [0, 1)");
  }
}

std::size_t window_count(std::size_t n, const WindowConfig& cfg) {
  if (n < cfg.window_len) return 0;
  return (n - cfg.window_len) / cfg.stride() + 1;
}

std::vector<Window> segment(const SensorSeries& series, const WindowConfig& cfg) {
  cfg.validate();
  const std::size_t n = series.samples.size();
  if (n < cfg.window_len) {
    throw Error(Errc::SeriesTooShort, "series '" + series.sensor_id + "' has " +
                                          std::to_string(n) + " samples, window needs " +
                                          std::to_string(cfg.window_len));
  }
  const std::size_t count = window_count(n, cfg);
  const std::size_t stride = cfg.stride();
  const std::span<const SensorSample> all(series.samples);
  std::vector<Window> windows;
  windows.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t start = k * stride;
    const auto samples = all.subspan(start, cfg.window_len);
    windows.push_back({start, samples.front().t + series.epoch_offset_s,
                       samples.back().t + series.epoch_offset_s, samples});
  }
  return windows;
}

std::string_view feature_name(Feature feature) noexcept {
  switch (feature) {
    case kMeanGyroZ: return "mean_gyro_z";
    case kMeanGyroX: return "mean_gyro_x";
    case kMeanAccelX: return "mean_accel_x";
    case kMeanAccelY: return "mean_accel_y";
    case kMeanAccelZ: return "mean_accel_z";
    case kIqrAccelX: return "iqr_accel_x";
    case kPeakAccelX: return "peak_accel_x";
    case kFeatureCount: break;
  }
  return "?";
}

double interpolated_quantile(std::span<const double> sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

FeatureTuple extract_features(std::span<const SensorSample> samples) {
  if (samples.empty()) throw Error(Errc::EmptyWindow, "cannot featurize an empty window");
  const double n = static_cast<double>(samples.size());
  double gz = 0, gx = 0, ax = 0, ay = 0, az = 0, peak = 0;
  std::vector<double> accel_x;
  accel_x.reserve(samples.size());
  for (const SensorSample& s : samples) {
    gz += s.gyro_z;
    gx += s.gyro_x;
    ax += s.accel_x;
    ay += s.accel_y;
    az += s.accel_z;
    peak = std::max(peak, std::abs(s.accel_x));
    accel_x.push_back(s.accel_x);
  }
  std::sort(accel_x.begin(), accel_x.end());
  const double iqr = interpolated_quantile(accel_x, 0.75) - interpolated_quantile(accel_x, 0.25);
  return {gz / n, gx / n, ax / n, ay / n, az / n, iqr, peak};
}

std::string_view label_mode_name(LabelMode mode) noexcept {
  switch (mode) {
    case LabelMode::Nearest: return "nearest";
    case LabelMode::WindowMean: return "window_mean";
    case LabelMode::Interpolate: return "interpolate";
  }
  return "?";
}

std::optional<LabelMode> parse_label_mode(std::string_view text) noexcept {
  for (LabelMode m : {LabelMode::Nearest, LabelMode::WindowMean, LabelMode::Interpolate}) {
    if (text == label_mode_name(m)) return m;
  }
  return std::nullopt;
}

void LabelPolicy::validate() const {
  if (!(max_gap_s > 0.0) || !std::isfinite(max_gap_s)) {
    throw Error(Errc::InvalidConfig, "max_gap_s must be positive");
  }
}

namespace {

// Index of the record nearest to t; ties go to the earlier record.
std::size_t nearest_record(const std::vector<double>& times, double t) {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  if (it == times.end()) return times.size() - 1;
  const std::size_t after = static_cast<std::size_t>(it - times.begin());
  const std::size_t before = after - 1;
  return (t - times[before] <= times[after] - t) ? before : after;
}

}  // namespace

WindowLabels label_windows(std::span<const Window> windows, const EmissionSeries& emissions,
                           GasId gas, const LabelPolicy& policy) {
  policy.validate();
  if (!emissions.has(gas)) {
    throw Error(Errc::MissingChannel,
                "emission series has no " + std::string(gas_name(gas)) + " channel");
  }
  if (windows.empty()) throw Error(Errc::AllWindowsDropped, "no windows to label");
  if (emissions.records.empty()) throw Error(Errc::EmptyStream, "emission series is empty");

  std::vector<double> times;
  std::vector<double> values;
  times.reserve(emissions.records.size());
  values.reserve(emissions.records.size());
  for (const EmissionRecord& r : emissions.records) {
    times.push_back(r.t + emissions.epoch_offset_s);
    values.push_back(r.values.at(gas).magnitude);
  }

  WindowLabels out;
  out.values.assign(windows.size(), 0.0);
  out.kept.assign(windows.size(), false);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const Window& w = windows[i];
    const double center = w.center_t();
    const std::size_t near = nearest_record(times, center);
    if (std::abs(times[near] - center) > policy.max_gap_s) {
      ++out.dropped;
      continue;
    }
    double label = values[near];
    switch (policy.mode) {
      case LabelMode::Nearest:
        break;
      case LabelMode::WindowMean: {
        const auto lo = std::lower_bound(times.begin(), times.end(), w.start_t);
        const auto hi = std::upper_bound(times.begin(), times.end(), w.end_t);
        if (lo < hi) {
          double sum = 0.0;
          for (auto it = lo; it != hi; ++it) sum += values[static_cast<std::size_t>(it - times.begin())];
          label = sum / static_cast<double>(hi - lo);
        }
        break;
      }
      case LabelMode::Interpolate: {
        // Outside the record span there is nothing to interpolate; keep nearest.
        if (center > times.front() && center < times.back()) {
          const auto it = std::upper_bound(times.begin(), times.end(), center);
          const std::size_t b = static_cast<std::size_t>(it - times.begin());
          const std::size_t a = b - 1;
          if (times[a] == center) {
            label = values[a];
          } else {
            const double frac = (center - times[a]) / (times[b] - times[a]);
            label = values[a] + frac * (values[b] - values[a]);
          }
        }
        break;
      }
    }
    out.values[i] = label;
    out.kept[i] = true;
  }
  if (out.dropped == windows.size()) {
    throw Error(Errc::AllWindowsDropped,
                "every window is farther than " + csv::format_exact(policy.max_gap_s) +
                    " s from an emission record");
  }
  return out;
}

ChannelMask ChannelMask::all(std::size_t sensor_count) {
  ChannelMask mask;
  mask.sensors.clear();
  for (std::size_t i = 0; i < sensor_count; ++i) mask.sensors.push_back(i);
  return mask;
}

ChannelMask ChannelMask::accel_only(std::size_t sensor_count) {
  ChannelMask mask = all(sensor_count);
  mask.features = {false, false, true, true, true, true, true};
  return mask;
}

std::size_t ChannelMask::features_per_sensor() const {
  return static_cast<std::size_t>(std::count(features.begin(), features.end(), true));
}

namespace {

std::array<bool, kFeatureCount> parse_feature_set(std::string_view text) {
  if (text == "all") return {true, true, true, true, true, true, true};
  if (text == "accel") return {false, false, true, true, true, true, true};
  if (text == "gyro") return {true, true, false, false, false, false, false};
  std::array<bool, kFeatureCount> set{};
  for (std::string_view token : csv::split(text, '+')) {
    bool found = false;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      if (token == feature_name(static_cast<Feature>(f))) {
        set[f] = true;
        found = true;
      }
    }
    if (!found) throw Error(Errc::InvalidConfig, "unknown feature '" + std::string(token) + "'");
  }
  return set;
}

}  // namespace

ChannelMask ChannelMask::parse(std::string_view text) {
  ChannelMask mask;
  std::string_view feature_part = text;
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    mask.sensors.clear();
    for (std::string_view token : csv::split(text.substr(0, colon), '+')) {
      if (token.size() < 2 || token[0] != 's') {
        throw Error(Errc::InvalidConfig, "bad sensor selector '" + std::string(token) + "'");
      }
      auto index = csv::parse_double(token.substr(1));
      if (!index || *index < 1 || *index != std::floor(*index)) {
        throw Error(Errc::InvalidConfig, "bad sensor selector '" + std::string(token) + "'");
      }
      mask.sensors.push_back(static_cast<std::size_t>(*index) - 1);
    }
    feature_part = text.substr(colon + 1);
  }
  mask.features = parse_feature_set(feature_part);
  if (mask.sensors.empty() || mask.features_per_sensor() == 0) {
    throw Error(Errc::InvalidConfig, "channel mask selects nothing");
  }
  return mask;
}

std::string ChannelMask::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < sensors.size(); ++i) os << (i ? "+" : "") << 's' << sensors[i] + 1;
  os << ':';
  if (features_per_sensor() == kFeatureCount) {
    os << "all";
  } else {
    bool first = true;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      if (!features[f]) continue;
      os << (first ? "" : "+") << feature_name(static_cast<Feature>(f));
      first = false;
    }
  }
  return os.str();
}

const Eigen::VectorXd& Dataset::target(GasId gas) const {
  auto it = y.find(gas);
  if (it == y.end()) {
    throw Error(Errc::MissingChannel,
                "dataset has no target for " + std::string(gas_name(gas)));
  }
  return it->second;
}

Dataset Dataset::select(std::span<const std::size_t> indices) const {
  Dataset out;
  out.feature_names = feature_names;
  out.sensor_ids = sensor_ids;
  out.window = window;
  out.labels = labels;
  out.mask = mask;
  out.windows_total = windows_total;
  out.dropped = dropped;
  const auto n = static_cast<Eigen::Index>(indices.size());
  out.X.resize(n, X.cols());
  for (const auto& [gas, values] : y) out.y[gas].resize(n);
  out.rows.reserve(indices.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto src = static_cast<Eigen::Index>(indices[static_cast<std::size_t>(r)]);
    out.X.row(r) = X.row(src);
    for (const auto& [gas, values] : y) out.y[gas](r) = values(src);
    out.rows.push_back(rows[static_cast<std::size_t>(src)]);
  }
  return out;
}

void Dataset::validate() const {
  if (feature_names.size() != static_cast<std::size_t>(X.cols())) {
    throw Error(Errc::DimensionMismatch, "feature name count differs from column count");
  }
  if (rows.size() != size()) throw Error(Errc::DimensionMismatch, "row metadata count");
  if (!X.allFinite()) throw Error(Errc::NonFiniteInput, "feature matrix has non-finite values");
  for (const auto& [gas, values] : y) {
    if (static_cast<std::size_t>(values.size()) != size()) {
      throw Error(Errc::DimensionMismatch,
                  "target " + std::string(gas_name(gas)) + " length differs from row count");
    }
    if (!values.allFinite()) {
      throw Error(Errc::NonFiniteInput, "target " + std::string(gas_name(gas)) + " non-finite");
    }
  }
}

namespace {

// Sample of `series` nearest to t on the shared clock; ties go earlier.
const SensorSample& nearest_sample(const SensorSeries& series, double t) {
  const auto& s = series.samples;
  const double local = t - series.epoch_offset_s;
  const auto it = std::lower_bound(s.begin(), s.end(), local,
                                   [](const SensorSample& a, double v) { return a.t < v; });
  if (it == s.begin()) return s.front();
  if (it == s.end()) return s.back();
  const auto before = std::prev(it);
  return (local - before->t <= it->t - local) ? *before : *it;
}

}  // namespace

Dataset build_dataset(std::span<const SensorSeries> sensors, const EmissionSeries& emissions,
                      const WindowConfig& cfg, const LabelPolicy& policy,
                      const ChannelMask& mask) {
  cfg.validate();
  policy.validate();
  if (mask.sensors.empty() || mask.features_per_sensor() == 0) {
    throw Error(Errc::InvalidConfig, "channel mask selects nothing");
  }
  std::vector<const SensorSeries*> selected;
  for (std::size_t idx : mask.sensors) {
    if (idx >= sensors.size()) {
      throw Error(Errc::InvalidConfig, "channel mask selects sensor s" + std::to_string(idx + 1) +
                                           " but only " + std::to_string(sensors.size()) +
                                           " sensor series were given");
    }
    if (sensors[idx].samples.empty()) {
      throw Error(Errc::EmptyStream, "sensor '" + sensors[idx].sensor_id + "' is empty");
    }
    selected.push_back(&sensors[idx]);
  }

  // Common span on the shared clock.
  double span_lo = -std::numeric_limits<double>::infinity();
  double span_hi = std::numeric_limits<double>::infinity();
  for (const SensorSeries* s : selected) {
    span_lo = std::max(span_lo, s->samples.front().t + s->epoch_offset_s);
    span_hi = std::min(span_hi, s->samples.back().t + s->epoch_offset_s);
  }
  if (span_lo > span_hi) {
    throw Error(Errc::NoTemporalOverlap, "sensor series share no common time span");
  }
  if (emissions.records.empty()) throw Error(Errc::EmptyStream, "emission series is empty");
  const double emis_lo = emissions.records.front().t + emissions.epoch_offset_s;
  const double emis_hi = emissions.records.back().t + emissions.epoch_offset_s;
  if (emis_hi < span_lo || emis_lo > span_hi) {
    throw Error(Errc::NoTemporalOverlap, "emission records do not overlap the sensor span");
  }

  // Reference clock: first selected sensor, clipped to the common span.
  const SensorSeries& ref = *selected.front();
  SensorSeries clipped;
  clipped.sensor_id = ref.sensor_id;
  clipped.rate_hz = ref.rate_hz;
  clipped.epoch_offset_s = ref.epoch_offset_s;
  for (const SensorSample& s : ref.samples) {
    const double t = s.t + ref.epoch_offset_s;
    if (t >= span_lo && t <= span_hi) clipped.samples.push_back(s);
  }
  const std::vector<Window> windows = segment(clipped, cfg);

  std::vector<GasId> gases;
  for (GasId gas : kModeledGases) {
    if (emissions.has(gas)) gases.push_back(gas);
  }
  if (gases.empty()) throw Error(Errc::MissingChannel, "emission series has no modeled gas");

  std::vector<bool> keep(windows.size(), true);
  std::map<GasId, WindowLabels> labels;
  for (GasId gas : gases) {
    WindowLabels l = label_windows(windows, emissions, gas, policy);
    for (std::size_t i = 0; i < windows.size(); ++i) keep[i] = keep[i] && l.kept[i];
    labels.emplace(gas, std::move(l));
  }
  std::vector<std::size_t> kept_rows;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (keep[i]) kept_rows.push_back(i);
  }
  if (kept_rows.empty()) throw Error(Errc::AllWindowsDropped, "no window has a label");

  Dataset ds;
  ds.window = cfg;
  ds.labels = policy;
  ds.mask = mask;
  ds.windows_total = windows.size();
  ds.dropped = windows.size() - kept_rows.size();
  for (const SensorSeries* s : selected) {
    ds.sensor_ids.push_back(s->sensor_id);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      if (mask.features[f]) {
        ds.feature_names.push_back(s->sensor_id + "_" +
                                   std::string(feature_name(static_cast<Feature>(f))));
      }
    }
  }

  const auto n_rows = static_cast<Eigen::Index>(kept_rows.size());
  ds.X.resize(n_rows, static_cast<Eigen::Index>(ds.feature_names.size()));
  ds.rows.resize(kept_rows.size());
  parallel_for(kept_rows.size(), default_thread_count(), [&](std::size_t r) {
    const Window& w = windows[kept_rows[r]];
    Eigen::Index col = 0;
    for (std::size_t k = 0; k < selected.size(); ++k) {
      FeatureTuple features;
      if (k == 0) {
        features = extract_features(w);
      } else {
        std::vector<SensorSample> paired;
        paired.reserve(w.samples.size());
        for (const SensorSample& s : w.samples) {
          paired.push_back(nearest_sample(*selected[k], s.t + ref.epoch_offset_s));
        }
        features = extract_features(paired);
      }
      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        if (mask.features[f]) ds.X(static_cast<Eigen::Index>(r), col++) = features[f];
      }
    }
    ds.rows[r] = {w.start_t, w.center_t()};
  });
  for (GasId gas : gases) {
    Eigen::VectorXd target(n_rows);
    const WindowLabels& l = labels.at(gas);
    for (Eigen::Index r = 0; r < n_rows; ++r) target(r) = l.values[kept_rows[static_cast<std::size_t>(r)]];
    ds.y.emplace(gas, std::move(target));
  }
  ds.validate();
  return ds;
}

}  // namespace emissionscope
