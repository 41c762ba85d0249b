#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>

namespace windwoa::harness {

struct SynthSpec {
  std::size_t rows = 3600;
  std::uint64_t seed = 7;
  std::filesystem::path meta_path;  // empty: bundled station table
  std::filesystem::path corr_path;  // empty: bundled correlation table
  double sd_to_mean = 0.5;
};

/// Experiment settings. Defaults: 50
/// repetitions of a 70/30 split, a 9-8-1 network, 200 LM epochs, WOA with 30
/// agents for 50 iterations.
struct ExperimentConfig {
  std::optional<std::filesystem::path> data_path;  // empty: use `synth`
  SynthSpec synth;

  std::size_t repetitions = 50;
  double train_fraction = 0.7;
  std::uint64_t seed = 42;

  std::size_t hidden_units = 8;
  std::size_t lm_epochs = 200;
  double lm_damping = 1e-3;

  std::size_t woa_population = 30;
  std::size_t woa_iterations = 50;
  double woa_spiral_b = 1.0;
  double weight_lower = -5.0;
  double weight_upper = 5.0;
  std::optional<double> woa_frozen_l;
  std::optional<double> woa_frozen_p;
  bool woa_lm_refine = false;

  /// Train the hybrid on every repetition instead of only the selected one.
  bool hybrid_per_repetition = false;

  std::filesystem::path output_dir = "out";
  std::size_t jobs = 1;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Parses a config document or a run manifest (whose "config" member is
/// used). Relative paths resolve against `base_dir`. Throws ConfigError on
/// unknown keys and wrong types.
ExperimentConfig config_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});
nlohmann::ordered_json to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace windwoa::harness
