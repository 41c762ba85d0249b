#pragma once

#include "json.hpp"

#include <filesystem>
#include <string>

#include "windwoa/mlp.hpp"
#include "windwoa/normalizer.hpp"

namespace windwoa::mlp {

/// Affine constants mapping raw features / target into network units.
struct Scaling {
  data::Normalizer features;
  data::Normalizer target;
};

/// Persisted network: topology, layout-ordered parameters, scaling.
struct StoredModel {
  Topology topology;
  ParameterVector params;
  Scaling scaling;
  std::string trainer;  // empty when untagged
  double training_rmse = 0.0;
};

nlohmann::ordered_json to_json(const StoredModel& model);
/// Throws DataError when the parameter array does not match the topology.
StoredModel model_from_json(const nlohmann::json& doc);

void save_model(const StoredModel& model, const std::filesystem::path& path);
StoredModel load_model(const std::filesystem::path& path);

}  // namespace windwoa::mlp
