#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "emissionscope/rng.hpp"
#include "emissionscope/windowing.hpp"
#include "test_util.hpp"

using namespace emissionscope;

namespace {

SensorSeries series_of(std::size_t n, double rate = 100.0, double offset = 0.0) {
  SensorSeries s{"s1", rate, offset, {}};
  for (std::size_t i = 0; i < n; ++i) {
    s.samples.push_back({static_cast<double>(i) / rate, 0.01 * static_cast<double>(i), 0, 1, 0, 0, 0});
  }
  return s;
}

std::vector<SensorSample> accel_x_samples(const std::vector<double>& xs) {
  std::vector<SensorSample> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back({0.01 * static_cast<double>(i), xs[i], 0, 0, 0, 0, 0});
  return out;
}

EmissionSeries emissions(const std::vector<std::pair<double, double>>& tv, GasId gas = GasId::CO) {
  EmissionSeries e;
  e.gases = {gas};
  for (auto [t, v] : tv) e.records.push_back({t, {{gas, {v, gas_unit(gas)}}}});
  return e;
}

Window window_at(double start, double end) { return Window{0, start, end, {}}; }

// Every start index s with s + len <= n and s a multiple of stride.
std::vector<std::size_t> brute_starts(std::size_t n, std::size_t len, std::size_t stride) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s + len <= n; ++s) {
    if (s % stride == 0) out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("stride and count") {
  WindowConfig cfg;
  CHECK(cfg.stride() == 12);
  CHECK(window_count(60000, cfg) == 4998);
  CHECK(window_count(24, cfg) == 0);
  CHECK((WindowConfig{10, 0.0}.stride()) == 10);
  CHECK((WindowConfig{3, 0.9}.stride()) == 1);
  CHECK_ERRC((WindowConfig{0, 0.5}.validate()), InvalidConfig);
  CHECK_ERRC((WindowConfig{25, 1.0}.validate()), InvalidConfig);
  CHECK_ERRC((WindowConfig{25, -0.1}.validate()), InvalidConfig);
}

TEST_CASE("N=100 gives seven windows at multiples of 12") {
  const auto w = segment(series_of(100), {});
  std::vector<std::size_t> starts;
  for (const auto& x : w) starts.push_back(x.start_index);
  CHECK(starts == brute_starts(100, 25, 12));
  CHECK(starts == std::vector<std::size_t>{0, 12, 24, 36, 48, 60, 72});
  CHECK(w[1].samples.size() == 25);
  CHECK(w[1].start_t == doctest::Approx(0.12));
  CHECK(w[1].end_t == doctest::Approx(0.36));
}

TEST_CASE("boundary lengths") {
  CHECK(segment(series_of(25), {}).size() == 1);
  CHECK_ERRC(segment(series_of(24), {}), SeriesTooShort);
}

TEST_CASE("property: segmentation matches brute force and coverage is at most 3") {
  for (std::size_t n : {25u, 26u, 36u, 37u, 100u, 1000u, 1237u}) {
    const auto w = segment(series_of(n), {});
    CHECK(w.size() == brute_starts(n, 25, 12).size());
    CHECK(w.size() == window_count(n, {}));
    std::vector<int> cover(n, 0);
    for (const auto& x : w)
      for (std::size_t i = x.start_index; i < x.start_index + 25; ++i) ++cover[i];
    CHECK(*std::max_element(cover.begin(), cover.end()) <= 3);
  }
}

TEST_CASE("window times include the epoch offset") {
  const auto w = segment(series_of(50, 100.0, 10.0), {});
  CHECK(w[0].start_t == 10.0);
  CHECK(w[0].center_t() == doctest::Approx(10.12));
}

TEST_CASE("constant window features") {
  std::vector<SensorSample> s(25, SensorSample{0, 1, 0, 0, 0, 0, 0});
  const auto f = extract_features(s);
  CHECK(f[kMeanGyroZ] == 0);
  CHECK(f[kMeanGyroX] == 0);
  CHECK(f[kMeanAccelX] == 1);
  CHECK(f[kMeanAccelY] == 0);
  CHECK(f[kMeanAccelZ] == 0);
  CHECK(f[kIqrAccelX] == 0);
  CHECK(f[kPeakAccelX] == 1);
}

TEST_CASE("accel_x = 1..25") {
  std::vector<double> xs(25);
  std::iota(xs.begin(), xs.end(), 1.0);
  const auto f = extract_features(accel_x_samples(xs));
  // Sorted values, h = 24 p: Q1 at h = 6 -> 7, Q3 at h = 18 -> 19.
  CHECK(f[kMeanAccelX] == 13);
  CHECK(interpolated_quantile(xs, 0.25) == 7);
  CHECK(interpolated_quantile(xs, 0.75) == 19);
  CHECK(f[kIqrAccelX] == 12);
  CHECK(f[kPeakAccelX] == 25);
}

TEST_CASE("interpolated quantile between order statistics") {
  const std::vector<double> v{1, 2, 4, 8};
  // h = 3 * 0.25 = 0.75 -> 1 + 0.75 * (2 - 1); h = 2.25 -> 4 + 0.25 * 4
  CHECK(interpolated_quantile(v, 0.25) == doctest::Approx(1.75));
  CHECK(interpolated_quantile(v, 0.75) == doctest::Approx(5.0));
  CHECK(interpolated_quantile(v, 0.0) == 1);
  CHECK(interpolated_quantile(v, 1.0) == 8);
  const std::vector<double> one{3};
  CHECK(interpolated_quantile(one, 0.25) == 3);
}

TEST_CASE("peak is the largest magnitude") {
  std::vector<double> xs(25, 1.0);
  xs[0] = -3;
  CHECK(extract_features(accel_x_samples(xs))[kPeakAccelX] == 3);
}

TEST_CASE("empty window") {
  CHECK_ERRC(extract_features(std::span<const SensorSample>{}), EmptyWindow);
}

TEST_CASE("property: features are invariant under within-window permutation") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SensorSample> s(25);
    for (auto& x : s) {
      x = {0, rng.uniform(-5, 5), rng.normal(), rng.normal(), rng.uniform(-100, 100),
           rng.normal(), rng.uniform(-100, 100)};
    }
    const auto base = extract_features(s);
    for (std::size_t i = s.size() - 1; i > 0; --i) std::swap(s[i], s[rng.index(i + 1)]);
    const auto shuffled = extract_features(s);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      CHECK(shuffled[f] == doctest::Approx(base[f]).epsilon(1e-12));
    }
    CHECK(shuffled[kIqrAccelX] == base[kIqrAccelX]);
    CHECK(shuffled[kPeakAccelX] == base[kPeakAccelX]);
  }
}

TEST_CASE("property: sign flip of accel_x") {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SensorSample> s(25);
    for (auto& x : s) x.accel_x = rng.uniform(-10, 10);
    auto flipped = s;
    for (auto& x : flipped) x.accel_x = -x.accel_x;
    const auto a = extract_features(s);
    const auto b = extract_features(flipped);
    CHECK(b[kIqrAccelX] == doctest::Approx(a[kIqrAccelX]).epsilon(1e-12));
    CHECK(b[kPeakAccelX] == a[kPeakAccelX]);
    CHECK(b[kMeanAccelX] == doctest::Approx(-a[kMeanAccelX]).epsilon(1e-12));
  }
}

TEST_CASE("nearest label") {
  const Window w[] = {window_at(0.0, 0.25)};
  const auto l = label_windows(w, emissions({{0, 10}, {1, 20}}), GasId::CO, {});
  CHECK(l.kept[0]);
  CHECK(l.values[0] == 10);
}

TEST_CASE("nearest ties go to the earlier record") {
  const Window w[] = {window_at(0.0, 1.0)};
  CHECK(label_windows(w, emissions({{0, 10}, {1, 20}}), GasId::CO, {}).values[0] == 10);
}

TEST_CASE("interpolated label at the midpoint") {
  const Window w[] = {window_at(0.25, 0.75)};
  const auto l = label_windows(w, emissions({{0, 10}, {1, 20}}), GasId::CO,
                               {LabelMode::Interpolate, 2.0});
  CHECK(l.values[0] == 15);
}

TEST_CASE("window mean label averages records inside the window") {
  const Window w[] = {window_at(0.5, 2.5)};
  const auto l = label_windows(w, emissions({{0, 1}, {1, 10}, {2, 20}, {3, 40}}), GasId::CO,
                               {LabelMode::WindowMean, 2.0});
  CHECK(l.values[0] == 15);
}

TEST_CASE("gap rule drops distant windows") {
  const Window w[] = {window_at(0, 0.5), window_at(2.75, 3.25)};
  const auto e = emissions({{0, 10}});
  const auto l = label_windows(w, e, GasId::CO, {});
  CHECK(l.kept[0]);
  CHECK_FALSE(l.kept[1]);
  CHECK(l.dropped == 1);
  const Window far[] = {window_at(2.75, 3.25)};
  CHECK_ERRC(label_windows(far, e, GasId::CO, {}), AllWindowsDropped);
  CHECK_ERRC(label_windows(w, e, GasId::NO, {}), MissingChannel);
}

TEST_CASE("property: interpolation is exact on affine labels") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = rng.uniform(0, 100);
    const double b = rng.uniform(-5, 5);
    std::vector<std::pair<double, double>> tv;
    for (int i = 0; i <= 20; ++i) tv.push_back({i * 0.5, a + b * i * 0.5});
    std::vector<Window> ws;
    for (int i = 0; i < 50; ++i) {
      const double s = rng.uniform(0, 9.5);
      ws.push_back(window_at(s, s + 0.24));
    }
    const auto l = label_windows(ws, emissions(tv), GasId::CO, {LabelMode::Interpolate, 2.0});
    for (std::size_t i = 0; i < ws.size(); ++i) {
      CHECK(l.values[i] == doctest::Approx(a + b * ws[i].center_t()).epsilon(1e-12));
    }
  }
}

TEST_CASE("channel masks") {
  CHECK(ChannelMask::all().features_per_sensor() == 7);
  CHECK(ChannelMask::accel_only().features_per_sensor() == 5);
  CHECK(ChannelMask::parse("s1:accel").sensors == std::vector<std::size_t>{0});
  CHECK(ChannelMask::parse("gyro").features_per_sensor() == 2);
  CHECK(ChannelMask::parse("s1+s2:all").to_string() == "s1+s2:all");
  const auto m = ChannelMask::parse("s2:mean_gyro_z+peak_accel_x");
  CHECK(ChannelMask::parse(m.to_string()).to_string() == m.to_string());
  CHECK(m.features_per_sensor() == 2);
  CHECK_ERRC(ChannelMask::parse("s0:all"), InvalidConfig);
  CHECK_ERRC(ChannelMask::parse("bogus"), InvalidConfig);
}

namespace {

EmissionSeries modeled_emissions(double t_end, double offset = 0.0) {
  EmissionSeries e;
  e.epoch_offset_s = offset;
  e.gases = {GasId::CO, GasId::NO};
  for (double t = 0; t <= t_end; t += 1.0) {
    e.records.push_back({t, {{GasId::CO, {40 + t, Unit::Ppm}}, {GasId::NO, {100, Unit::Ppm}}}});
  }
  return e;
}

}  // namespace

TEST_CASE("dataset columns from two sensors and the accel mask") {
  std::vector<SensorSeries> sensors{series_of(1000), series_of(1000)};
  sensors[1].sensor_id = "s2";
  const auto ds = build_dataset(sensors, modeled_emissions(10), {}, {}, ChannelMask::all());
  CHECK(ds.X.cols() == 14);
  CHECK(ds.feature_names.front() == "s1_mean_gyro_z");
  CHECK(ds.feature_names.back() == "s2_peak_accel_x");
  CHECK(ds.size() == window_count(1000, {}));
  CHECK(ds.y.size() == 2);

  const std::vector<SensorSeries> one{series_of(1000)};
  const auto accel = build_dataset(one, modeled_emissions(10), {}, {}, ChannelMask::accel_only(1));
  CHECK(accel.X.cols() == 5);
}

TEST_CASE("property: dataset rows are finite and aligned") {
  const std::vector<SensorSeries> one{series_of(3000)};
  const auto ds = build_dataset(one, modeled_emissions(15), {}, {}, ChannelMask::all(1));
  // Windows centered beyond t = 17 are more than 2 s from the last record.
  CHECK(ds.dropped > 0);
  CHECK(ds.windows_total == ds.size() + ds.dropped);
  CHECK(ds.X.allFinite());
  for (const auto& [gas, y] : ds.y) {
    CHECK(y.size() == ds.X.rows());
    CHECK(y.allFinite());
  }
  CHECK(ds.rows.size() == ds.size());
  CHECK_NOTHROW(ds.validate());
}

TEST_CASE("dataset failure modes") {
  const std::vector<SensorSeries> one{series_of(1000)};
  CHECK_ERRC(build_dataset(one, modeled_emissions(10, 100.0), {}, {}, ChannelMask::all(1)),
             NoTemporalOverlap);
  const std::vector<SensorSeries> shifted{series_of(1000), series_of(1000, 100.0, 50.0)};
  CHECK_ERRC(build_dataset(shifted, modeled_emissions(100), {}, {}, ChannelMask::all(2)),
             NoTemporalOverlap);
  const std::vector<SensorSeries> tiny{series_of(20)};
  CHECK_ERRC(build_dataset(tiny, modeled_emissions(10), {}, {}, ChannelMask::all(1)),
             SeriesTooShort);
  CHECK_ERRC(build_dataset(one, modeled_emissions(10), {}, {}, ChannelMask::all(2)),
             InvalidConfig);
}

TEST_CASE("target lookup and row selection") {
  const std::vector<SensorSeries> one{series_of(1000)};
  const auto ds = build_dataset(one, modeled_emissions(10), {}, {}, ChannelMask::all(1));
  CHECK_ERRC(ds.target(GasId::CO2), MissingChannel);
  const std::vector<std::size_t> pick{3, 1};
  const auto sub = ds.select(pick);
  CHECK(sub.size() == 2);
  CHECK(sub.X.row(0) == ds.X.row(3));
  CHECK(sub.target(GasId::CO)(1) == ds.target(GasId::CO)(1));
  CHECK(sub.rows[0].window_center_t == ds.rows[3].window_center_t);
}
