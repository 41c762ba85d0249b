#pragma once

// Three-layer perceptron: tanh hidden layer, linear output layer.
//
// Parameters live in one flat vector so that gradient-free optimizers can
// search them directly. Layout, in order:
//   input->hidden weights, row-major by hidden unit  (n_hidden * n_inputs)
//   hidden biases                                     (n_hidden)
//   hidden->output weights, row-major by output unit  (n_outputs * n_hidden)
//   output biases                                     (n_outputs)

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>

#include "windwoa/parallel.hpp"

namespace windwoa::mlp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ParameterVector = Eigen::VectorXd;

enum class Activation { tanh, linear };

struct Topology {
  std::size_t n_inputs = 9;
  std::size_t n_hidden = 8;
  std::size_t n_outputs = 1;
  Activation hidden_activation = Activation::tanh;
  Activation output_activation = Activation::linear;

  std::size_t parameter_count() const {
    return n_inputs * n_hidden + n_hidden + n_hidden * n_outputs + n_outputs;
  }
  void validate() const;

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Unpacked weights; w1 is n_hidden x n_inputs, w2 is n_outputs x n_hidden.
struct Layers {
  Matrix w1;
  Vector b1;
  Matrix w2;
  Vector b2;
};

ParameterVector flatten(const Topology& topology, const Layers& layers);
Layers unflatten(const Topology& topology, const ParameterVector& params);

/// Weights uniform in [-0.5, 0.5], biases zero.
ParameterVector init_params(const Topology& topology, std::uint64_t seed);

/// Hidden-layer activations tanh(W1 x + b1).
Vector hidden_activations(const Topology& topology, const ParameterVector& params,
                          const Vector& features);
Vector forward(const Topology& topology, const ParameterVector& params, const Vector& features);

/// Training/evaluation data: one sample per row of `features`.
struct SampleSet {
  Matrix features;
  Vector targets;

  std::size_t size() const { return static_cast<std::size_t>(targets.size()); }
  void validate() const;
};

/// Row-wise forward pass for a single-output network. `features` has one
/// sample per row; an empty matrix gives an empty vector.
Vector predict_batch(const Topology& topology, const ParameterVector& params,
                     const Matrix& features, ExecPolicy policy = ExecPolicy::serial);

/// d output / d params for every sample (rows = samples, cols = parameters),
/// by exact backward differentiation. Single-output networks only.
Matrix output_jacobian(const Topology& topology, const ParameterVector& params,
                       const Matrix& features, ExecPolicy policy = ExecPolicy::serial);

}  // namespace windwoa::mlp
