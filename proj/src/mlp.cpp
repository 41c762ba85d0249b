#include "windwoa/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "windwoa/error.hpp"
#include "windwoa/rng.hpp"

namespace windwoa::mlp {

namespace {

struct Offsets {
  std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0, end = 0;
  explicit Offsets(const Topology& t)
      : w1(0),
        b1(t.n_inputs * t.n_hidden),
        w2(b1 + t.n_hidden),
        b2(w2 + t.n_hidden * t.n_outputs),
        end(b2 + t.n_outputs) {}
};

void check_params(const Topology& topology, const ParameterVector& params) {
  if (static_cast<std::size_t>(params.size()) != topology.parameter_count())
    throw ContractViolation("mlp: parameter vector has length " + std::to_string(params.size()) +
                            ", topology needs " + std::to_string(topology.parameter_count()));
}

void check_single_output(const Topology& topology, const char* what) {
  if (topology.n_outputs != 1) throw ContractViolation(std::string(what) + ": single-output only");
}

// tanh kept strictly inside (-1, 1); plain tanh rounds to +-1 past |z| ~ 19.
constexpr double kTanhLimit = 1.0 - 0x1p-53;

inline double bounded_tanh(double z) {
  return std::max(std::min(std::tanh(z), kTanhLimit), -kTanhLimit);
}

// Parameters rearranged for the row kernel: input weights transposed so the
// hidden pre-activations of one sample accumulate contiguously. Each
// pre-activation still sums bias, then inputs in index order, so results match
// a plain dot-product loop bit for bit.
struct Kernel {
  std::size_t n_in, n_hidden;
  std::vector<double> w1t;  // n_in x n_hidden
  const double* b1;
  const double* w2;  // output 0
  double b2;

  Kernel(const Topology& t, const double* p, const Offsets& o)
      : n_in(t.n_inputs), n_hidden(t.n_hidden), w1t(t.n_inputs * t.n_hidden),
        b1(p + o.b1), w2(p + o.w2), b2(p[o.b2]) {
    for (std::size_t h = 0; h < n_hidden; ++h)
      for (std::size_t i = 0; i < n_in; ++i) w1t[i * n_hidden + h] = p[o.w1 + h * n_in + i];
  }

  // `x` is a contiguous feature row; fills `hidden` and returns output 0.
  double run(const double* x, double* hidden) const {
    for (std::size_t h = 0; h < n_hidden; ++h) hidden[h] = b1[h];
    for (std::size_t i = 0; i < n_in; ++i) {
      const double xi = x[i];
      const double* w = w1t.data() + i * n_hidden;
      for (std::size_t h = 0; h < n_hidden; ++h) hidden[h] += w[h] * xi;
    }
    for (std::size_t h = 0; h < n_hidden; ++h) hidden[h] = bounded_tanh(hidden[h]);
    double y = b2;
    for (std::size_t h = 0; h < n_hidden; ++h) y += w2[h] * hidden[h];
    return y;
  }
};

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Forward pass for one sample, all outputs.
void forward_all(const Topology& t, const double* p, const Offsets& o, const double* x,
                 double* hidden, double* out) {
  const Kernel k(t, p, o);
  k.run(x, hidden);
  for (std::size_t j = 0; j < t.n_outputs; ++j) {
    double y = p[o.b2 + j];
    const double* w = p + o.w2 + j * t.n_hidden;
    for (std::size_t h = 0; h < t.n_hidden; ++h) y += w[h] * hidden[h];
    out[j] = y;
  }
}

}  // namespace

void Topology::validate() const {
  if (n_inputs == 0 || n_hidden == 0 || n_outputs == 0)
    throw ContractViolation("mlp: layer sizes must be positive");
  if (hidden_activation != Activation::tanh || output_activation != Activation::linear)
    throw ContractViolation("mlp: only tanh hidden / linear output is supported");
}

void SampleSet::validate() const {
  if (targets.size() == 0) throw ContractViolation("sample set is empty");
  if (features.rows() != targets.size())
    throw ContractViolation("sample set: feature rows and target count differ");
  if (!features.allFinite() || !targets.allFinite())
    throw ContractViolation("sample set contains non-finite values");
}

ParameterVector flatten(const Topology& t, const Layers& layers) {
  t.validate();
  const auto nh = static_cast<Eigen::Index>(t.n_hidden);
  const auto ni = static_cast<Eigen::Index>(t.n_inputs);
  const auto no = static_cast<Eigen::Index>(t.n_outputs);
  if (layers.w1.rows() != nh || layers.w1.cols() != ni || layers.b1.size() != nh ||
      layers.w2.rows() != no || layers.w2.cols() != nh || layers.b2.size() != no)
    throw ContractViolation("flatten: layer shapes do not match topology");

  const Offsets o(t);
  ParameterVector p(static_cast<Eigen::Index>(o.end));
  for (Eigen::Index h = 0; h < nh; ++h)
    for (Eigen::Index i = 0; i < ni; ++i) p[static_cast<Eigen::Index>(o.w1) + h * ni + i] = layers.w1(h, i);
  p.segment(static_cast<Eigen::Index>(o.b1), nh) = layers.b1;
  for (Eigen::Index k = 0; k < no; ++k)
    for (Eigen::Index h = 0; h < nh; ++h) p[static_cast<Eigen::Index>(o.w2) + k * nh + h] = layers.w2(k, h);
  p.segment(static_cast<Eigen::Index>(o.b2), no) = layers.b2;
  return p;
}

Layers unflatten(const Topology& t, const ParameterVector& p) {
  t.validate();
  check_params(t, p);
  const auto nh = static_cast<Eigen::Index>(t.n_hidden);
  const auto ni = static_cast<Eigen::Index>(t.n_inputs);
  const auto no = static_cast<Eigen::Index>(t.n_outputs);
  const Offsets o(t);
  Layers layers{Matrix(nh, ni), Vector(nh), Matrix(no, nh), Vector(no)};
  for (Eigen::Index h = 0; h < nh; ++h)
    for (Eigen::Index i = 0; i < ni; ++i) layers.w1(h, i) = p[static_cast<Eigen::Index>(o.w1) + h * ni + i];
  layers.b1 = p.segment(static_cast<Eigen::Index>(o.b1), nh);
  for (Eigen::Index k = 0; k < no; ++k)
    for (Eigen::Index h = 0; h < nh; ++h) layers.w2(k, h) = p[static_cast<Eigen::Index>(o.w2) + k * nh + h];
  layers.b2 = p.segment(static_cast<Eigen::Index>(o.b2), no);
  return layers;
}

ParameterVector init_params(const Topology& t, std::uint64_t seed) {
  t.validate();
  const Offsets o(t);
  ParameterVector p = ParameterVector::Zero(static_cast<Eigen::Index>(o.end));
  Rng rng(seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  for (std::size_t i = o.w1; i < o.b1; ++i) p[static_cast<Eigen::Index>(i)] = dist(rng);
  for (std::size_t i = o.w2; i < o.b2; ++i) p[static_cast<Eigen::Index>(i)] = dist(rng);
  return p;
}

Vector hidden_activations(const Topology& t, const ParameterVector& params, const Vector& x) {
  check_params(t, params);
  if (static_cast<std::size_t>(x.size()) != t.n_inputs)
    throw ContractViolation("forward: feature vector length does not match n_inputs");
  Vector hidden(static_cast<Eigen::Index>(t.n_hidden));
  Vector out(static_cast<Eigen::Index>(t.n_outputs));
  const Offsets o(t);
  forward_all(t, params.data(), o, x.data(), hidden.data(), out.data());
  return hidden;
}

Vector forward(const Topology& t, const ParameterVector& params, const Vector& x) {
  check_params(t, params);
  if (static_cast<std::size_t>(x.size()) != t.n_inputs)
    throw ContractViolation("forward: feature vector length does not match n_inputs");
  Vector hidden(static_cast<Eigen::Index>(t.n_hidden));
  Vector out(static_cast<Eigen::Index>(t.n_outputs));
  const Offsets o(t);
  forward_all(t, params.data(), o, x.data(), hidden.data(), out.data());
  return out;
}

Vector predict_batch(const Topology& t, const ParameterVector& params, const Matrix& features,
                     ExecPolicy policy) {
  check_single_output(t, "predict_batch");
  check_params(t, params);
  if (features.rows() == 0) return Vector(0);
  if (static_cast<std::size_t>(features.cols()) != t.n_inputs)
    throw ContractViolation("predict_batch: column count does not match n_inputs");

  const Offsets o(t);
  const Kernel kernel(t, params.data(), o);
  const RowMajor rows = features;
  Vector out(features.rows());
  const Eigen::Index n = features.rows();
  auto body = [&](Eigen::Index r, std::vector<double>& hidden) {
    out[r] = kernel.run(rows.data() + r * rows.cols(), hidden.data());
  };
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel
    {
      std::vector<double> hidden(t.n_hidden);
#pragma omp for schedule(static)
      for (Eigen::Index r = 0; r < n; ++r) body(r, hidden);
    }
  } else {
    std::vector<double> hidden(t.n_hidden);
    for (Eigen::Index r = 0; r < n; ++r) body(r, hidden);
  }
  return out;
}

Matrix output_jacobian(const Topology& t, const ParameterVector& params, const Matrix& features,
                       ExecPolicy policy) {
  check_single_output(t, "output_jacobian");
  check_params(t, params);
  if (features.rows() > 0 && static_cast<std::size_t>(features.cols()) != t.n_inputs)
    throw ContractViolation("output_jacobian: column count does not match n_inputs");

  const Offsets o(t);
  const double* p = params.data();
  const Kernel kernel(t, p, o);
  const RowMajor rows = features;
  const Eigen::Index n = features.rows();
  Matrix jac(n, static_cast<Eigen::Index>(o.end));

  auto body = [&](Eigen::Index r, std::vector<double>& hidden) {
    const double* x = rows.data() + r * rows.cols();
    kernel.run(x, hidden.data());
    for (std::size_t h = 0; h < t.n_hidden; ++h) {
      // d y / d z_h = w2_h * (1 - tanh^2)
      const double dz = p[o.w2 + h] * (1.0 - hidden[h] * hidden[h]);
      for (std::size_t i = 0; i < t.n_inputs; ++i)
        jac(r, static_cast<Eigen::Index>(o.w1 + h * t.n_inputs + i)) =
            dz * x[i];
      jac(r, static_cast<Eigen::Index>(o.b1 + h)) = dz;
      jac(r, static_cast<Eigen::Index>(o.w2 + h)) = hidden[h];
    }
    jac(r, static_cast<Eigen::Index>(o.b2)) = 1.0;
  };
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel
    {
      std::vector<double> hidden(t.n_hidden);
#pragma omp for schedule(static)
      for (Eigen::Index r = 0; r < n; ++r) body(r, hidden);
    }
  } else {
    std::vector<double> hidden(t.n_hidden);
    for (Eigen::Index r = 0; r < n; ++r) body(r, hidden);
  }
  return jac;
}

}  // namespace windwoa::mlp
