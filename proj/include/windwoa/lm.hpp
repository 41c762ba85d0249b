#pragma once

#include <vector>

#include "windwoa/mlp.hpp"

namespace windwoa::mlp {

struct LmOptions {
  std::size_t epochs = 200;
  double damping_init = 1e-3;
  double damping_factor = 10.0;
  /// How many times one epoch may raise the damping after a failed solve.
  std::size_t max_solve_retries = 12;
  ExecPolicy policy = ExecPolicy::serial;
};

struct LmResult {
  ParameterVector params;
  double initial_rmse = 0.0;
  /// Training RMSE of the incumbent after each epoch; never increases.
  std::vector<double> rmse_history;
  std::size_t accepted_steps = 0;
  double final_damping = 0.0;
  /// Set when the normal equations stayed unsolvable after every retry.
  bool stopped_early = false;
};

/// Levenberg-Marquardt on the sum of squared residuals. Each epoch makes one
/// update attempt: accepted steps divide the damping by `damping_factor`,
/// rejected steps multiply it and leave the parameters untouched.
LmResult lm_train(const Topology& topology, const ParameterVector& initial, const SampleSet& data,
                  const LmOptions& options = {});

double training_rmse(const Topology& topology, const ParameterVector& params,
                     const SampleSet& data, ExecPolicy policy = ExecPolicy::serial);

}  // namespace windwoa::mlp
