#include <cmath>
#include <numbers>
#include <sstream>

#include "emissionscope/ingest.hpp"
#include "emissionscope/metrics.hpp"
#include "emissionscope/synth.hpp"
#include "emissionscope/tree.hpp"
#include "test_util.hpp"

using namespace emissionscope;

namespace {

SynthConfig quick(double duration, double noise, std::uint64_t seed = 7) {
  SynthConfig cfg = SynthConfig::defaults();
  cfg.duration_s = duration;
  cfg.noise_std = noise;
  cfg.seed = seed;
  return cfg;
}

Dataset dataset_of(const SynthOutput& out) {
  const std::vector<SensorSeries> sensors{out.cabin, out.stick};
  return build_dataset(sensors, derive_nox(out.pems), {}, {}, ChannelMask::all());
}

}  // namespace

TEST_CASE("noiseless idle: flat emissions and pure sinusoids") {
  SynthConfig cfg = quick(10, 0.0);
  cfg.cycle = {{Activity::Idle, 10.0}};
  const auto out = generate(cfg);
  for (const auto& r : out.pems.records) {
    for (const auto& [gas, reading] : r.values) CHECK(reading.magnitude == cfg.gases.at(gas).base);
  }
  const AxisMotion& ax = cfg.motion[0].accel[0];
  for (const auto& s : out.stick.samples) {
    const double expected = ax.offset + ax.amplitude * std::sin(2 * std::numbers::pi * ax.freq_hz * s.t + 1.1);
    CHECK(s.accel_x == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(out.cabin.samples.size() == 1000);
  CHECK(out.pems.records.size() == 11);
}

TEST_CASE("same seed gives identical outputs, different seed does not") {
  const auto a = generate(quick(30, 0.1, 3));
  const auto b = generate(quick(30, 0.1, 3));
  CHECK(a.cabin == b.cabin);
  CHECK(a.stick == b.stick);
  CHECK(a.pems == b.pems);
  CHECK(truth_to_json(a.truth) == truth_to_json(b.truth));
  CHECK_FALSE(generate(quick(30, 0.1, 4)).cabin == a.cabin);
}

TEST_CASE("property: generated streams pass ingest validation and round-trip") {
  for (double noise : {0.0, 0.1, 1.0, 5.0}) {
    const auto out = generate(quick(60, noise, 11));
    CHECK_NOTHROW(validate(out.cabin));
    CHECK_NOTHROW(validate(out.stick));
    CHECK_NOTHROW(validate(out.pems));
    std::ostringstream s1, pems;
    write_inertial_csv(s1, out.cabin);
    write_pems_csv(pems, out.pems);
    std::istringstream in1(s1.str()), inp(pems.str());
    CHECK(parse_inertial_csv(in1, "s1") == out.cabin);
    CHECK(parse_pems_csv(inp) == out.pems);
  }
}

TEST_CASE("ground truth follows the cycle") {
  const auto out = generate(quick(60, 0.0));
  CHECK(out.truth.state_at(0) == Activity::Idle);
  CHECK(out.truth.state_at(12) == Activity::Dig);
  CHECK(out.truth.state_at(20) == Activity::Swing);
  CHECK(out.truth.state_at(25) == Activity::Dump);
  CHECK(out.truth.state_at(29) == Activity::Idle);
  CHECK(out.truth.emission_at(GasId::CO, 12) == 40 * 5.0);
  CHECK(out.truth.emission_at(GasId::NOX, 20) == 100 * 6.0 + 5 * 6.0);
  CHECK(out.truth.noiseless.at(GasId::CO)[12] == out.pems.records[12].values.at(GasId::CO).magnitude);
}

TEST_CASE("property: noiseless window means are constant within a dwell") {
  const auto out = generate(quick(120, 0.0));
  const auto windows = segment(out.stick, {});
  const auto truth = truth_for_windows(out.truth, windows);
  SynthConfig cfg = quick(120, 0.0);
  std::size_t interior = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    if (out.truth.state_at(w.start_t) != out.truth.state_at(w.end_t)) continue;  // edge window
    ++interior;
    const auto f = extract_features(w);
    const auto& m = cfg.motion[static_cast<std::size_t>(truth[i].state)];
    CHECK(f[kMeanAccelX] == doctest::Approx(m.accel[0].offset).epsilon(1e-9));
    CHECK(f[kMeanAccelY] == doctest::Approx(m.accel[1].offset).epsilon(1e-9));
    CHECK(f[kMeanAccelZ] == doctest::Approx(m.accel[2].offset).epsilon(1e-9));
    CHECK(f[kMeanGyroX] == doctest::Approx(m.gyro[0].offset).epsilon(1e-9));
    CHECK(f[kMeanGyroZ] == doctest::Approx(m.gyro[2].offset).epsilon(1e-9));
  }
  CHECK(interior > windows.size() * 9 / 10);
}

TEST_CASE("noiseless labels equal the state's value") {
  const auto out = generate(quick(120, 0.0));
  const auto ds = dataset_of(out);
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(ds.size()); ++r) {
    // Nearest-record labels: the record at round(center) carries its state's value.
    const double t = std::round(ds.rows[static_cast<std::size_t>(r)].window_center_t);
    CHECK(ds.target(GasId::CO)(r) == out.truth.emission_at(GasId::CO, t));
    CHECK(ds.target(GasId::NOX)(r) == out.truth.emission_at(GasId::NOX, t));
  }
}

TEST_CASE("noiseless default cycle: a full tree fits window features exactly") {
  const auto ds = dataset_of(generate(quick(600, 0.0)));
  TreeConfig cfg;
  cfg.min_leaf_size = 1;
  cfg.min_parent_size = 2;
  for (GasId gas : kModeledGases) {
    const auto t = fit_tree(ds.X, ds.target(gas), cfg);
    const auto m = compute_metrics(ds.target(gas), predict_tree(t, ds.X));
    CHECK(*m.r2 == 1.0);
  }
}

TEST_CASE("property: more noise never helps the oracle predictor") {
  std::optional<double> previous;
  for (double noise : {0.0, 0.1, 0.3}) {
    const auto out = generate(quick(300, noise, 5));
    const auto ds = dataset_of(out);
    Eigen::VectorXd oracle(static_cast<Eigen::Index>(ds.size()));
    for (std::size_t r = 0; r < ds.size(); ++r) {
      oracle(static_cast<Eigen::Index>(r)) = out.truth.emission_at(GasId::CO, ds.rows[r].window_center_t);
    }
    const double r2 = *compute_metrics(ds.target(GasId::CO), oracle).r2;
    if (previous) CHECK(r2 <= *previous);
    previous = r2;
  }
}

TEST_CASE("invalid configs") {
  auto cfg = quick(10, 0.1);
  cfg.duration_s = 0;
  CHECK_ERRC(generate(cfg), InvalidConfig);
  cfg = quick(10, -1);
  CHECK_ERRC(generate(cfg), InvalidConfig);
  cfg = quick(10, 0.1);
  cfg.cycle = {{Activity::Dig, 0.0}};
  CHECK_ERRC(generate(cfg), InvalidConfig);
  cfg = quick(10, 0.1);
  cfg.gases.erase(GasId::NO2);
  CHECK_ERRC(generate(cfg), InvalidConfig);
}
