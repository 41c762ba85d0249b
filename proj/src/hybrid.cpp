#include "windwoa/hybrid.hpp"

#include <cmath>
#include <limits>

#include "windwoa/error.hpp"

namespace windwoa::hybrid {

std::string_view trainer_name(Trainer trainer) {
  return trainer == Trainer::mlp_woa ? "MLP_WOA" : "MLP_LMA";
}

mlp::StoredModel TrainedModel::stored() const {
  return {topology, params, scaling, std::string(trainer_name(trainer)), training_rmse};
}

double mlp_fitness(const mlp::ParameterVector& params, const mlp::Topology& topology,
                   const mlp::SampleSet& train_set, ExecPolicy policy) {
  const mlp::Vector predicted = mlp::predict_batch(topology, params, train_set.features, policy);
  double sse = 0.0;
  for (Eigen::Index i = 0; i < predicted.size(); ++i) {
    if (!std::isfinite(predicted[i])) return std::numeric_limits<double>::infinity();
    const double d = predicted[i] - train_set.targets[i];
    sse += d * d;
  }
  const double rmse = std::sqrt(sse / static_cast<double>(train_set.size()));
  return std::isfinite(rmse) ? rmse : std::numeric_limits<double>::infinity();
}

woa::WoaConfig default_woa_config(const mlp::Topology& topology, std::uint64_t seed) {
  woa::WoaConfig config;
  config.population_size = 30;
  config.max_iterations = 50;
  config.seed = seed;
  config.spiral_constant_b = 1.0;
  config.bounds = woa::Bounds::uniform(topology.parameter_count(), -5.0, 5.0);
  return config;
}

TrainedModel train_mlp_woa(const mlp::Topology& topology, const mlp::SampleSet& train_set,
                           const woa::WoaConfig& config, const WoaTrainingOptions& options) {
  topology.validate();
  train_set.validate();
  if (config.bounds.dim() != topology.parameter_count())
    throw ContractViolation("train_mlp_woa: bounds dimension must equal the parameter count");

  // Agents are evaluated in parallel by the optimizer when asked to; the
  // fitness itself stays serial so its value never depends on the schedule.
  const woa::ObjectiveFunction objective = [&](const woa::Vector& x) {
    return mlp_fitness(x, topology, train_set, ExecPolicy::serial);
  };
  woa::WoaResult best = woa::woa_optimize(config, objective);

  TrainedModel model;
  model.topology = topology;
  model.trainer = Trainer::mlp_woa;
  model.params = std::move(best.best_position);
  model.training_rmse = best.best_fitness;
  if (options.lm_refine) {
    mlp::LmResult refined = mlp::lm_train(topology, model.params, train_set, options.refine);
    model.params = std::move(refined.params);
    model.training_rmse = mlp_fitness(model.params, topology, train_set);
    model.stopped_early = refined.stopped_early;
  }
  return model;
}

TrainedModel train_mlp_baseline(const mlp::Topology& topology, const mlp::SampleSet& train_set,
                                std::uint64_t seed, const mlp::LmOptions& options) {
  const mlp::ParameterVector initial = mlp::init_params(topology, seed);
  mlp::LmResult lm = mlp::lm_train(topology, initial, train_set, options);
  TrainedModel model;
  model.topology = topology;
  model.trainer = Trainer::mlp_lma;
  model.params = std::move(lm.params);
  model.training_rmse = mlp_fitness(model.params, topology, train_set);
  model.stopped_early = lm.stopped_early;
  return model;
}

}  // namespace windwoa::hybrid
