#include "emissionscope/linear.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace emissionscope;

TEST_CASE("exact fits") {
  Eigen::MatrixXd X(3, 1);
  X << 1, 2, 3;
  Eigen::VectorXd y(3);
  y << 2, 4, 6;
  auto m = fit_linear(X, y);
  CHECK(m.intercept == doctest::Approx(0).epsilon(1e-12).scale(1));
  CHECK(m.weights(0) == doctest::Approx(2).epsilon(1e-12));

  Eigen::MatrixXd X2(2, 1);
  X2 << 0, 1;
  Eigen::VectorXd y2(2);
  y2 << 1, 3;
  m = fit_linear(X2, y2);
  CHECK(m.intercept == doctest::Approx(1).epsilon(1e-12));
  CHECK(m.weights(0) == doctest::Approx(2).epsilon(1e-12));
}

TEST_CASE("prediction") {
  LinearModel m{Eigen::VectorXd::Constant(1, 2.0), 0.0};
  Eigen::MatrixXd x(1, 1);
  x << 5;
  CHECK(predict_linear(m, x)(0) == 10);
  LinearModel zero{Eigen::VectorXd::Zero(3), 7.5};
  Rng rng(1);
  const auto p = predict_linear(zero, oracle::random_matrix(rng, 10, 3));
  CHECK((p.array() == 7.5).all());
  CHECK_ERRC(predict_linear(zero, Eigen::MatrixXd::Zero(2, 2)), DimensionMismatch);
}

TEST_CASE("random 50x7 problem against the normal equations") {
  Rng rng(42);
  const Eigen::MatrixXd X = oracle::random_matrix(rng, 50, 7, -3, 3);
  const Eigen::VectorXd y = oracle::random_vector(rng, 50, -10, 10);
  const auto m = fit_linear(X, y);
  const Eigen::VectorXd resid = y - predict_linear(m, X);
  for (Eigen::Index c = 0; c < 7; ++c) {
    CHECK(std::fabs(X.col(c).dot(resid)) <= 1e-8 * X.col(c).norm() * resid.norm());
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(50);
  CHECK(std::fabs(ones.dot(resid)) <= 1e-8 * ones.norm() * resid.norm());

  const Eigen::VectorXd beta = oracle::normal_equations(X, y);
  CHECK(m.intercept == doctest::Approx(beta(0)).epsilon(1e-8));
  for (Eigen::Index c = 0; c < 7; ++c) CHECK(m.weights(c) == doctest::Approx(beta(c + 1)).epsilon(1e-8));

  Eigen::MatrixXd A(50, 8);
  A << ones, X;
  const Eigen::VectorXd expected = A * beta;
  const Eigen::VectorXd got = predict_linear(m, X);
  CHECK((got - expected).norm() <= 1e-8 * expected.norm());
}

TEST_CASE("property: perturbing any weight does not lower the SSE") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::MatrixXd X = oracle::random_matrix(rng, 30, 4);
    const Eigen::VectorXd y = oracle::random_vector(rng, 30, -5, 5);
    const auto m = fit_linear(X, y);
    const double sse = (y - predict_linear(m, X)).squaredNorm();
    for (Eigen::Index c = 0; c < 4; ++c) {
      for (double d : {1e-3, -1e-3}) {
        auto p = m;
        p.weights(c) += d;
        CHECK((y - predict_linear(p, X)).squaredNorm() >= sse);
      }
    }
    for (double d : {1e-3, -1e-3}) {
      auto p = m;
      p.intercept += d;
      CHECK((y - predict_linear(p, X)).squaredNorm() >= sse);
    }
  }
}

TEST_CASE("rank-deficient design still fits") {
  Rng rng(2);
  Eigen::MatrixXd X(20, 3);
  X.col(0) = oracle::random_vector(rng, 20);
  X.col(1) = 2.0 * X.col(0);
  X.col(2).setConstant(4.0);
  const Eigen::VectorXd y = 3.0 * X.col(0) + Eigen::VectorXd::Constant(20, 1.0);
  const auto m = fit_linear(X, y);
  CHECK((predict_linear(m, X) - y).norm() < 1e-9);
}

TEST_CASE("degenerate inputs") {
  CHECK_ERRC(fit_linear(Eigen::MatrixXd::Zero(1, 2), Eigen::VectorXd::Zero(1)), DegenerateDesign);
  CHECK_ERRC(fit_linear(Eigen::MatrixXd::Zero(5, 0), Eigen::VectorXd::Zero(5)), DegenerateDesign);
  CHECK_ERRC(fit_linear(Eigen::MatrixXd::Zero(5, 2), Eigen::VectorXd::Zero(4)), DimensionMismatch);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 1);
  bad(1, 0) = std::nan("");
  CHECK_ERRC(fit_linear(bad, Eigen::VectorXd::Zero(3)), NonFiniteInput);
}

TEST_CASE("property: row permutation permutes predictions") {
  Rng rng(13);
  const Eigen::MatrixXd X = oracle::random_matrix(rng, 25, 3);
  const Eigen::VectorXd y = oracle::random_vector(rng, 25);
  const auto m = fit_linear(X, y);
  const Eigen::VectorXd p = predict_linear(m, X);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(25);
  perm.setIdentity();
  for (Eigen::Index i = 24; i > 0; --i) std::swap(perm.indices()(i), perm.indices()(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(i) + 1))));
  CHECK(predict_linear(m, perm * X) == perm * p);
}
