#include "windwoa/lm.hpp"

#include <Eigen/Cholesky>

#include <cmath>

#include "windwoa/error.hpp"

namespace windwoa::mlp {

namespace {

double sum_squares(const Vector& v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += v[i] * v[i];
  return s;
}

}  // namespace

double training_rmse(const Topology& topology, const ParameterVector& params,
                     const SampleSet& data, ExecPolicy policy) {
  const Vector residual = data.targets - predict_batch(topology, params, data.features, policy);
  return std::sqrt(sum_squares(residual) / static_cast<double>(data.size()));
}

LmResult lm_train(const Topology& topology, const ParameterVector& initial, const SampleSet& data,
                  const LmOptions& options) {
  if (options.epochs < 1) throw ContractViolation("lm_train: epochs must be >= 1");
  if (!(options.damping_init > 0.0) || !(options.damping_factor > 1.0))
    throw ContractViolation("lm_train: damping must be positive and factor > 1");
  topology.validate();
  if (topology.n_outputs != 1) throw ContractViolation("lm_train: single-output topology required");
  data.validate();

  const double n = static_cast<double>(data.size());
  const auto n_params = static_cast<Eigen::Index>(topology.parameter_count());

  LmResult result;
  result.params = initial;
  Vector residual = data.targets - predict_batch(topology, result.params, data.features, options.policy);
  double sse = sum_squares(residual);
  result.initial_rmse = std::sqrt(sse / n);
  result.rmse_history.reserve(options.epochs);

  double damping = options.damping_init;
  Matrix normal(n_params, n_params);
  Vector gradient(n_params);
  bool stale = true;

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    if (stale) {
      const Matrix jac = output_jacobian(topology, result.params, data.features, options.policy);
      normal.setZero();
      normal.selfadjointView<Eigen::Lower>().rankUpdate(jac.transpose());
      gradient.noalias() = jac.transpose() * residual;
      stale = false;
    }

    Vector step;
    std::size_t retries = 0;
    for (;;) {
      Matrix damped = normal;
      damped.diagonal().array() += damping;
      Eigen::LLT<Matrix, Eigen::Lower> llt(damped);
      if (llt.info() == Eigen::Success) {
        step = llt.solve(gradient);
        if (step.allFinite()) break;
      }
      if (++retries > options.max_solve_retries) break;
      damping *= options.damping_factor;
    }
    if (retries > options.max_solve_retries) {
      result.stopped_early = true;
      break;
    }

    const ParameterVector trial = result.params + step;
    const Vector trial_residual =
        data.targets - predict_batch(topology, trial, data.features, options.policy);
    const double trial_sse = sum_squares(trial_residual);
    if (std::isfinite(trial_sse) && trial_sse < sse) {
      result.params = trial;
      residual = trial_residual;
      sse = trial_sse;
      damping /= options.damping_factor;
      ++result.accepted_steps;
      stale = true;
    } else {
      damping *= options.damping_factor;
    }
    result.rmse_history.push_back(std::sqrt(sse / n));
  }
  result.final_damping = damping;
  return result;
}

}  // namespace windwoa::mlp
