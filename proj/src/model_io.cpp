#include "windwoa/model_io.hpp"

#include <fstream>

#include "windwoa/error.hpp"

namespace windwoa::mlp {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json vec_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd json_vec(const json& a) {
  if (!a.is_array()) throw DataError("model: expected a numeric array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

ordered_json normalizer_json(const data::Normalizer& n) {
  return {{"columns", n.names}, {"mean", vec_json(n.mean)}, {"sd", vec_json(n.sd)}};
}

data::Normalizer json_normalizer(const json& j) {
  data::Normalizer n;
  n.names = j.at("columns").get<std::vector<std::string>>();
  n.mean = json_vec(j.at("mean"));
  n.sd = json_vec(j.at("sd"));
  if (n.mean.size() != static_cast<Eigen::Index>(n.names.size()) || n.sd.size() != n.mean.size())
    throw DataError("model: normalization arrays disagree with column list");
  return n;
}

}  // namespace

nlohmann::ordered_json to_json(const StoredModel& model) {
  ordered_json doc;
  doc["topology"] = {{"n_inputs", model.topology.n_inputs},
                     {"n_hidden", model.topology.n_hidden},
                     {"n_outputs", model.topology.n_outputs},
                     {"hidden_activation", "tanh"},
                     {"output_activation", "linear"}};
  doc["params"] = vec_json(model.params);
  doc["normalization"] = {{"features", normalizer_json(model.scaling.features)},
                          {"target", normalizer_json(model.scaling.target)}};
  if (!model.trainer.empty()) doc["trainer"] = model.trainer;
  doc["training_rmse"] = model.training_rmse;
  return doc;
}

StoredModel model_from_json(const nlohmann::json& doc) {
  try {
    StoredModel m;
    const auto& t = doc.at("topology");
    m.topology.n_inputs = t.at("n_inputs").get<std::size_t>();
    m.topology.n_hidden = t.at("n_hidden").get<std::size_t>();
    m.topology.n_outputs = t.at("n_outputs").get<std::size_t>();
    if (t.value("hidden_activation", "tanh") != "tanh" ||
        t.value("output_activation", "linear") != "linear")
      throw DataError("model: unsupported activation");
    m.topology.validate();
    m.params = json_vec(doc.at("params"));
    if (static_cast<std::size_t>(m.params.size()) != m.topology.parameter_count())
      throw DataError("model: parameter array has " + std::to_string(m.params.size()) +
                      " entries, topology needs " + std::to_string(m.topology.parameter_count()));
    if (doc.contains("normalization")) {
      m.scaling.features = json_normalizer(doc["normalization"].at("features"));
      m.scaling.target = json_normalizer(doc["normalization"].at("target"));
    }
    m.trainer = doc.value("trainer", "");
    m.training_rmse = doc.value("training_rmse", 0.0);
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("model: malformed document: ") + e.what());
  } catch (const ContractViolation& e) {
    throw DataError(std::string("model: ") + e.what());
  }
}

void save_model(const StoredModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file " + path.string());
  out << to_json(model).dump(2) << '\n';
}

StoredModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("model: invalid JSON in " + path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace windwoa::mlp
