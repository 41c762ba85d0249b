#pragma once

// Training front-end shared by the two model families: the Levenberg-Marquardt
// baseline and the whale-optimized network, whose flattened weights are the
// WOA search space and whose fitness is the training RMSE.

#include <string_view>

#include "windwoa/lm.hpp"
#include "windwoa/mlp.hpp"
#include "windwoa/model_io.hpp"
#include "windwoa/woa.hpp"

namespace windwoa::hybrid {

enum class Trainer { mlp_lma, mlp_woa };

std::string_view trainer_name(Trainer trainer);

struct TrainedModel {
  mlp::Topology topology;
  mlp::ParameterVector params;
  Trainer trainer = Trainer::mlp_lma;
  /// In normalized target units.
  double training_rmse = 0.0;
  mlp::Scaling scaling;
  /// LM gave up on an unsolvable step; params are still the incumbent.
  bool stopped_early = false;

  mlp::StoredModel stored() const;
};

/// Training RMSE of the network at `params`; +inf when any prediction is
/// non-finite.
double mlp_fitness(const mlp::ParameterVector& params, const mlp::Topology& topology,
                   const mlp::SampleSet& train_set, ExecPolicy policy = ExecPolicy::serial);

struct WoaTrainingOptions {
  /// Polish the WOA incumbent with LM afterwards. Off unless asked for.
  bool lm_refine = false;
  mlp::LmOptions refine;
};

/// Population 30, 50 iterations, every parameter bounded to [-5, 5].
woa::WoaConfig default_woa_config(const mlp::Topology& topology, std::uint64_t seed);

TrainedModel train_mlp_woa(const mlp::Topology& topology, const mlp::SampleSet& train_set,
                           const woa::WoaConfig& config, const WoaTrainingOptions& options = {});

TrainedModel train_mlp_baseline(const mlp::Topology& topology, const mlp::SampleSet& train_set,
                                std::uint64_t seed, const mlp::LmOptions& options = {});

}  // namespace windwoa::hybrid
