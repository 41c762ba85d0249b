#include "doctest.h"

#include <Eigen/QR>
#include <cmath>

#include "windwoa/error.hpp"
#include "windwoa/lm.hpp"
#include "windwoa/rng.hpp"

using namespace windwoa;
using namespace windwoa::mlp;

namespace {

Topology net(std::size_t in, std::size_t hidden) {
  Topology t;
  t.n_inputs = in;
  t.n_hidden = hidden;
  return t;
}

ParameterVector random_params(const Topology& t, Rng& rng, double scale) {
  ParameterVector p(static_cast<Eigen::Index>(t.parameter_count()));
  for (auto& v : p) v = uniform(rng, -scale, scale);
  return p;
}

Matrix random_features(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng, -1.5, 1.5);
  return m;
}

double sd(const Vector& v) {
  return std::sqrt((v.array() - v.mean()).square().mean());
}

// y = 2x + N(0, 0.01^2) on 100 evenly spaced points in [-1, 1].
SampleSet linear_fixture() {
  Rng rng(2024);
  std::normal_distribution<double> noise(0.0, 0.01);
  SampleSet s;
  s.features = Vector::LinSpaced(100, -1.0, 1.0);
  s.targets = 2.0 * s.features.col(0);
  for (auto& y : s.targets) y += noise(rng);
  return s;
}

// Residual RMSE of the ordinary least-squares line through the data.
double least_squares_residual(const SampleSet& s) {
  Matrix a(s.features.rows(), 2);
  a.col(0) = s.features.col(0);
  a.col(1).setOnes();
  const Vector coef = a.colPivHouseholderQr().solve(s.targets);
  return std::sqrt((a * coef - s.targets).squaredNorm() / static_cast<double>(s.size()));
}

}  // namespace

TEST_CASE("property: analytic Jacobian matches central differences") {
  Rng rng(31);
  const double h = 1e-6;
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = trial % 2 ? net(3, 4) : net(1 + rng() % 5, 1 + rng() % 6);
    const auto p = random_params(t, rng, 1.0);
    const Matrix x = random_features(12, static_cast<Eigen::Index>(t.n_inputs), rng);
    const Matrix jac = output_jacobian(t, p, x);
    REQUIRE(jac.rows() == 12);
    REQUIRE(jac.cols() == p.size());
    Matrix fd(jac.rows(), jac.cols());
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      ParameterVector up = p, down = p;
      up[k] += h;
      down[k] -= h;
      fd.col(k) = (predict_batch(t, up, x) - predict_batch(t, down, x)) / (2.0 * h);
    }
    CHECK((jac - fd).norm() / jac.norm() < 1e-5);
  }
}

TEST_CASE("exact teacher parameters are a fixed point") {
  const auto t = net(2, 3);
  Rng rng(5);
  const auto truth = random_params(t, rng, 1.0);
  SampleSet s;
  s.features = random_features(40, 2, rng);
  s.targets = predict_batch(t, truth, s.features);
  const auto r = lm_train(t, truth, s, LmOptions{.epochs = 50});
  CHECK(r.initial_rmse == 0.0);
  CHECK(r.rmse_history.size() == 50);
  for (double e : r.rmse_history) CHECK(e <= 1e-12);
  for (std::size_t i = 1; i < r.rmse_history.size(); ++i) CHECK(r.rmse_history[i] <= r.rmse_history[i - 1]);
}

TEST_CASE("linear target on a 1-4-1 net") {
  const auto data = linear_fixture();
  const auto t = net(1, 4);
  const auto r = lm_train(t, init_params(t, 1), data);
  REQUIRE(r.rmse_history.size() == 200);
  const double final_rmse = r.rmse_history.back();
  CHECK(final_rmse == training_rmse(t, r.params, data));
  CHECK(final_rmse < 0.02 * sd(data.targets));
  CHECK(final_rmse <= 2.0 * least_squares_residual(data));
  CHECK(r.accepted_steps > 0);
  CHECK_FALSE(r.stopped_early);
}

TEST_CASE("property: incumbent history never increases") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = net(1 + rng() % 4, 1 + rng() % 6);
    SampleSet s;
    s.features = random_features(30, static_cast<Eigen::Index>(t.n_inputs), rng);
    s.targets = s.features.rowwise().sum().array().sin();
    const auto r = lm_train(t, random_params(t, rng, 2.0), s, LmOptions{.epochs = 40});
    CHECK(r.rmse_history.front() <= r.initial_rmse);
    for (std::size_t i = 1; i < r.rmse_history.size(); ++i) CHECK(r.rmse_history[i] <= r.rmse_history[i - 1]);
    CHECK(training_rmse(t, r.params, s) == r.rmse_history.back());
  }
}

TEST_CASE("preconditions") {
  const auto data = linear_fixture();
  const auto t = net(1, 4);
  CHECK_THROWS_AS(lm_train(t, init_params(t, 1), data, LmOptions{.epochs = 0}), ContractViolation);
  auto two = t;
  two.n_outputs = 2;
  CHECK_THROWS_AS(lm_train(two, init_params(two, 1), data), ContractViolation);
  CHECK_THROWS_AS(lm_train(t, ParameterVector::Zero(3), data), ContractViolation);
}

TEST_CASE("damping schedule") {
  const auto data = linear_fixture();
  const auto t = net(1, 4);
  const auto r = lm_train(t, init_params(t, 3), data, LmOptions{.epochs = 1});
  CHECK(r.rmse_history.size() == 1);
  if (r.accepted_steps == 1)
    CHECK(r.final_damping == doctest::Approx(1e-4));
  else
    CHECK(r.final_damping == doctest::Approx(1e-2));
}
