#include "emissionscope/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace emissionscope;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) y(i++) = x;
  return y;
}

}  // namespace

TEST_CASE("perfect prediction") {
  const auto m = compute_metrics(vec({1, 2, 3}), vec({1, 2, 3}));
  CHECK(m.r2 == 1.0);
  CHECK(m.rmse == 0);
  CHECK(m.mae == 0);
  CHECK(m.nrmse_pct == 0.0);
}

TEST_CASE("constant prediction of the mean") {
  const auto m = compute_metrics(vec({1, 2, 3}), vec({2, 2, 2}));
  CHECK(std::fabs(m.rmse - std::sqrt(2.0 / 3.0)) <= 1e-9);
  CHECK(std::fabs(m.mae - 2.0 / 3.0) <= 1e-9);
  REQUIRE(m.r2);
  CHECK(std::fabs(*m.r2) <= 1e-9);
  CHECK_FALSE(m.nrmse_pct);
  const auto a = compute_metrics(vec({1, 2, 3}), vec({2, 2, 2}), RangeMode::ActualRange);
  REQUIRE(a.nrmse_pct);
  CHECK(std::fabs(*a.nrmse_pct - 100.0 * std::sqrt(2.0 / 3.0) / 2.0) <= 1e-9);
  CHECK(*a.nrmse_pct == doctest::Approx(40.825).epsilon(1e-4));
}

TEST_CASE("zero-variance actual values leave R2 undefined") {
  const auto m = compute_metrics(vec({4, 4, 4}), vec({1, 5, 9}));
  CHECK_FALSE(m.r2);
  CHECK(format_metric(m.r2) == "undefined");
  CHECK(m.rmse > 0);
}

TEST_CASE("input errors") {
  CHECK_ERRC(compute_metrics(vec({1, 2}), vec({1})), LengthMismatch);
  CHECK_ERRC(compute_metrics(vec({1}), vec({1})), TooFewRows);
  CHECK_ERRC(compute_metrics(vec({1, std::nan("")}), vec({1, 2})), NonFiniteInput);
  CHECK_ERRC(compute_metrics(vec({1, 2}), vec({1, INFINITY})), NonFiniteInput);
}

TEST_CASE("range mode names") {
  CHECK(parse_range_mode("actual_range") == RangeMode::ActualRange);
  CHECK(parse_range_mode(range_mode_name(RangeMode::PredictedRange)) == RangeMode::PredictedRange);
  CHECK_FALSE(parse_range_mode("median"));
  CHECK(format_metric(0.123456789) == "0.123457");
}

TEST_CASE("property: matches the loop oracle") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng.index(50));
    const Eigen::VectorXd a = oracle::random_vector(rng, n, -10, 10);
    const Eigen::VectorXd p = oracle::random_vector(rng, n, -10, 10);
    const std::vector<double> av(a.data(), a.data() + n), pv(p.data(), p.data() + n);
    for (bool actual_range : {false, true}) {
      const auto m = compute_metrics(a, p, actual_range ? RangeMode::ActualRange : RangeMode::PredictedRange);
      const auto o = oracle::metrics(av, pv, actual_range);
      CHECK(m.rmse == doctest::Approx(o.rmse).epsilon(1e-12));
      CHECK(m.mae == doctest::Approx(o.mae).epsilon(1e-12));
      CHECK(*m.r2 == doctest::Approx(*o.r2).epsilon(1e-12));
      CHECK(*m.nrmse_pct == doctest::Approx(*o.nrmse_pct).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: scale and shift") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng.index(30));
    const Eigen::VectorXd a = oracle::random_vector(rng, n, -5, 5);
    const Eigen::VectorXd p = oracle::random_vector(rng, n, -5, 5);
    const double c = rng.uniform(0.1, 10);
    const double s = rng.uniform(-10, 10);
    const auto base = compute_metrics(a, p);
    const auto scaled = compute_metrics(c * a, c * p);
    const auto shifted = compute_metrics((a.array() + s).matrix(), (p.array() + s).matrix());
    CHECK(scaled.rmse == doctest::Approx(c * base.rmse).epsilon(1e-9));
    CHECK(scaled.mae == doctest::Approx(c * base.mae).epsilon(1e-9));
    CHECK(*scaled.r2 == doctest::Approx(*base.r2).epsilon(1e-9));
    CHECK(*scaled.nrmse_pct == doctest::Approx(*base.nrmse_pct).epsilon(1e-9));
    CHECK(shifted.rmse == doctest::Approx(base.rmse).epsilon(1e-9));
    CHECK(shifted.mae == doctest::Approx(base.mae).epsilon(1e-9));
    CHECK(*shifted.r2 == doctest::Approx(*base.r2).epsilon(1e-9));
    CHECK(*shifted.nrmse_pct == doctest::Approx(*base.nrmse_pct).epsilon(1e-9));
    CHECK(base.rmse >= base.mae);
  }
}

TEST_CASE("RMSE equals MAE when all absolute errors are equal") {
  const auto m = compute_metrics(vec({1, 2, 3, 4}), vec({2, 1, 4, 3}));
  CHECK(m.rmse == doctest::Approx(m.mae).epsilon(1e-15));
  const auto u = compute_metrics(vec({1, 2, 3, 4}), vec({1, 2, 3, 8}));
  CHECK(u.rmse > u.mae);
}

TEST_CASE("training-mean constant gives R2 exactly zero") {
  Eigen::VectorXd a = vec({1, 2, 3, 4, 5, 6, 7, 8});
  const auto m = compute_metrics(a, Eigen::VectorXd::Constant(8, a.mean()));
  CHECK(*m.r2 == 0.0);
}

TEST_CASE("swapping arguments keeps RMSE and MAE but not R2") {
  const Eigen::VectorXd a = vec({1, 2, 3, 10});
  const Eigen::VectorXd p = vec({2, 2, 5, 6});
  const auto m = compute_metrics(a, p);
  const auto s = compute_metrics(p, a);
  CHECK(m.rmse == s.rmse);
  CHECK(m.mae == s.mae);
  CHECK(*m.r2 != doctest::Approx(*s.r2));
}
