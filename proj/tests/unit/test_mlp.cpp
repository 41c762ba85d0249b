#include "doctest.h"

#include <cmath>

#include "windwoa/error.hpp"
#include "windwoa/mlp.hpp"
#include "windwoa/rng.hpp"

using namespace windwoa;
using namespace windwoa::mlp;

namespace {

Topology tiny(std::size_t in, std::size_t hidden) {
  Topology t;
  t.n_inputs = in;
  t.n_hidden = hidden;
  t.n_outputs = 1;
  return t;
}

ParameterVector random_params(const Topology& t, Rng& rng, double scale = 1.0) {
  ParameterVector p(static_cast<Eigen::Index>(t.parameter_count()));
  for (auto& v : p) v = uniform(rng, -scale, scale);
  return p;
}

Matrix random_features(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng, -2, 2);
  return m;
}

}  // namespace

TEST_CASE("topology") {
  const Topology t;
  CHECK(t.parameter_count() == 89);
  CHECK(t.n_inputs == 9);
  CHECK(t.n_hidden == 8);
  auto bad = t;
  bad.n_hidden = 0;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("forward examples") {
  const Topology t;
  const Vector x = Vector::LinSpaced(9, -1.0, 1.0);
  CHECK(forward(t, ParameterVector::Zero(89), x)[0] == 0.0);

  const auto one = tiny(1, 1);
  Vector in(1);
  in << 0.5;
  ParameterVector p(4);
  p << 1.0, 0.0, 1.0, 0.0;  // W1, b1, W2, b2
  CHECK(forward(one, p, in)[0] == doctest::Approx(0.46211715726000974).epsilon(1e-15));
  p << 0.0, 0.0, 5.0, 2.0;
  CHECK(forward(one, p, in)[0] == 2.0);
  in << -100.0;
  CHECK(forward(one, p, in)[0] == 2.0);

  CHECK_THROWS_AS(forward(t, ParameterVector::Zero(89), Vector::Zero(8)), ContractViolation);
  CHECK_THROWS_AS(forward(t, ParameterVector::Zero(88), x), ContractViolation);
}

TEST_CASE("forward matches a hand-rolled evaluation") {
  Rng rng(3);
  const Topology t;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_params(t, rng);
    Vector x(9);
    for (auto& v : x) v = uniform(rng, -2, 2);
    // Layout: W1 (8x9 row-major), b1, W2 (1x8), b2.
    double out = p[88];
    for (int h = 0; h < 8; ++h) {
      double s = p[72 + h];
      for (int i = 0; i < 9; ++i) s += p[h * 9 + i] * x[i];
      out += p[80 + h] * std::tanh(s);
    }
    CHECK(forward(t, p, x)[0] == doctest::Approx(out).epsilon(1e-13));
  }
}

TEST_CASE("flatten and unflatten") {
  const Topology t;
  Rng rng(9);
  const auto p = random_params(t, rng);
  CHECK(flatten(t, unflatten(t, p)) == p);
  CHECK_THROWS_AS(unflatten(t, ParameterVector::Zero(88)), ContractViolation);
  const Layers l = unflatten(t, p);
  CHECK(l.w1.rows() == 8);
  CHECK(l.w1.cols() == 9);
  CHECK(l.w1(1, 0) == p[9]);
  CHECK(l.b1[0] == p[72]);
  CHECK(l.w2(0, 7) == p[87]);
  CHECK(l.b2[0] == p[88]);
}

TEST_CASE("property: flatten/unflatten inverses over random topologies") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Topology t;
    t.n_inputs = 1 + rng() % 16;
    t.n_hidden = 1 + rng() % 16;
    t.n_outputs = 1 + rng() % 16;
    const auto p = random_params(t, rng);
    const Layers l = unflatten(t, p);
    CHECK(flatten(t, l) == p);
    CHECK(unflatten(t, flatten(t, l)).w2 == l.w2);
  }
}

TEST_CASE("init_params") {
  const Topology t;
  const auto a = init_params(t, 5);
  CHECK(a == init_params(t, 5));
  CHECK(a != init_params(t, 6));
  CHECK(a.size() == 89);
  CHECK(a.cwiseAbs().maxCoeff() <= 0.5);
  const Layers l = unflatten(t, a);
  CHECK(l.b1.isZero(0.0));
  CHECK(l.b2.isZero(0.0));
  CHECK(l.w1.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("predict_batch") {
  const Topology t;
  Rng rng(4);
  const auto p = random_params(t, rng);
  CHECK(predict_batch(t, p, Matrix(0, 9)).size() == 0);

  const Matrix x = random_features(50, 9, rng);
  const Vector batch = predict_batch(t, p, x);
  REQUIRE(batch.size() == 50);
  for (Eigen::Index i = 0; i < 50; ++i) CHECK(batch[i] == forward(t, p, x.row(i).transpose())[0]);

  Matrix dup(6, 9);
  for (int i = 0; i < 6; ++i) dup.row(i) = x.row(0);
  const Vector same = predict_batch(t, p, dup);
  for (int i = 1; i < 6; ++i) CHECK(same[i] == same[0]);
  CHECK_THROWS_AS(predict_batch(t, p, Matrix(3, 8)), ContractViolation);
}

TEST_CASE("forward is pure") {
  const Topology t;
  Rng rng(8);
  const auto p = random_params(t, rng, 3.0);
  const Matrix x = random_features(20, 9, rng);
  const Vector first = predict_batch(t, p, x);
  for (int k = 0; k < 5; ++k) CHECK(predict_batch(t, p, x) == first);
}

TEST_CASE("property: hidden activations lie strictly inside (-1, 1)") {
  const Topology t;
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_params(t, rng, 5.0);
    Vector x(9);
    for (auto& v : x) v = uniform(rng, -3, 3);
    const Vector h = hidden_activations(t, p, x);
    CHECK(h.size() == 8);
    CHECK(h.cwiseAbs().maxCoeff() < 1.0);
  }
  // Modestly large pre-activations still stay below 1 in double precision.
  const auto one = tiny(1, 1);
  ParameterVector p(4);
  p << 1.0, 0.0, 1.0, 0.0;
  Vector x(1);
  x << 18.0;
  CHECK(std::fabs(hidden_activations(one, p, x)[0]) < 1.0);
}

TEST_CASE("sample set validation") {
  SampleSet s;
  CHECK_THROWS_AS(s.validate(), ContractViolation);
  s.features = Matrix::Zero(3, 2);
  s.targets = Vector::Zero(2);
  CHECK_THROWS_AS(s.validate(), ContractViolation);
  s.targets = Vector::Zero(3);
  CHECK_NOTHROW(s.validate());
  s.features(1, 1) = std::nan("");
  CHECK_THROWS_AS(s.validate(), ContractViolation);
}

TEST_CASE("non-finite pre-activations propagate") {
  const auto one = tiny(1, 1);
  ParameterVector p(4);
  p << std::nan(""), 0.0, 1.0, 0.0;
  Vector x(1);
  x << 1.0;
  CHECK(std::isnan(forward(one, p, x)[0]));
}
