#include "windwoa/config.hpp"

#include <fstream>
#include <set>

#include "windwoa/error.hpp"

namespace windwoa::harness {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("wrong type for '" + std::string(key) + "' in " + where);
  }
}

void read_optional(const json& obj, const char* key, std::optional<double>& out,
                   const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  double v = 0.0;
  read(obj, key, v, where);
  out = v;
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

ordered_json optional_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train_fraction must lie in (0, 1)");
  if (hidden_units < 1) throw ConfigError("mlp.hidden must be >= 1");
  if (lm_epochs < 1) throw ConfigError("mlp.lm_epochs must be >= 1");
  if (!(lm_damping > 0.0)) throw ConfigError("mlp.lm_damping must be > 0");
  if (woa_population < 2) throw ConfigError("woa.population must be >= 2");
  if (woa_iterations < 1) throw ConfigError("woa.iterations must be >= 1");
  if (!(woa_spiral_b > 0.0)) throw ConfigError("woa.spiral_b must be > 0");
  if (!(weight_lower < weight_upper)) throw ConfigError("woa.weight_lower must be < weight_upper");
  if (woa_frozen_l && !(*woa_frozen_l >= -1.0 && *woa_frozen_l <= 1.0))
    throw ConfigError("woa.frozen_l must lie in [-1, 1]");
  if (woa_frozen_p && !(*woa_frozen_p >= 0.0 && *woa_frozen_p <= 1.0))
    throw ConfigError("woa.frozen_p must lie in [0, 1]");
  if (!data_path && synth.rows < 2) throw ConfigError("data.synth.rows must be >= 2");
  if (!(synth.sd_to_mean > 0.0)) throw ConfigError("data.synth.sd_to_mean must be > 0");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

ExperimentConfig config_from_json(const json& input, const std::filesystem::path& base_dir) {
  if (!input.is_object()) throw ConfigError("config must be a JSON object");
  // A run manifest carries the config it was produced from.
  const json& doc = input.contains("config") && input.contains("manifest_version")
                        ? input.at("config")
                        : input;
  const std::string top = "config";
  reject_unknown(doc,
                 {"$schema", "data", "repetitions", "train_fraction", "seed", "mlp", "woa",
                  "hybrid_per_repetition", "output_dir", "jobs"},
                 top);
  ExperimentConfig c;
  if (doc.contains("data")) {
    const json& data = doc.at("data");
    reject_unknown(data, {"path", "synth"}, "data");
    if (data.contains("path") && data.contains("synth"))
      throw ConfigError("data: give either 'path' or 'synth', not both");
    if (data.contains("path")) {
      std::string p;
      read(data, "path", p, "data");
      c.data_path = resolve(p, base_dir);
    }
    if (data.contains("synth")) {
      const json& s = data.at("synth");
      reject_unknown(s, {"rows", "seed", "meta", "corr", "sd_to_mean"}, "data.synth");
      read(s, "rows", c.synth.rows, "data.synth");
      read(s, "seed", c.synth.seed, "data.synth");
      read(s, "sd_to_mean", c.synth.sd_to_mean, "data.synth");
      std::string meta, corr;
      read(s, "meta", meta, "data.synth");
      read(s, "corr", corr, "data.synth");
      c.synth.meta_path = resolve(meta, base_dir);
      c.synth.corr_path = resolve(corr, base_dir);
    }
  }
  read(doc, "repetitions", c.repetitions, top);
  read(doc, "train_fraction", c.train_fraction, top);
  read(doc, "seed", c.seed, top);
  read(doc, "hybrid_per_repetition", c.hybrid_per_repetition, top);
  read(doc, "jobs", c.jobs, top);
  if (doc.contains("output_dir")) {
    std::string out;
    read(doc, "output_dir", out, top);
    c.output_dir = resolve(out, base_dir);
  }
  if (doc.contains("mlp")) {
    const json& m = doc.at("mlp");
    reject_unknown(m, {"hidden", "lm_epochs", "lm_damping"}, "mlp");
    read(m, "hidden", c.hidden_units, "mlp");
    read(m, "lm_epochs", c.lm_epochs, "mlp");
    read(m, "lm_damping", c.lm_damping, "mlp");
  }
  if (doc.contains("woa")) {
    const json& w = doc.at("woa");
    reject_unknown(w,
                   {"population", "iterations", "spiral_b", "weight_lower", "weight_upper",
                    "frozen_l", "frozen_p", "lm_refine"},
                   "woa");
    read(w, "population", c.woa_population, "woa");
    read(w, "iterations", c.woa_iterations, "woa");
    read(w, "spiral_b", c.woa_spiral_b, "woa");
    read(w, "weight_lower", c.weight_lower, "woa");
    read(w, "weight_upper", c.weight_upper, "woa");
    read_optional(w, "frozen_l", c.woa_frozen_l, "woa");
    read_optional(w, "frozen_p", c.woa_frozen_p, "woa");
    read(w, "lm_refine", c.woa_lm_refine, "woa");
  }
  c.validate();
  return c;
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  ordered_json doc;
  if (c.data_path) {
    doc["data"] = {{"path", c.data_path->string()}};
  } else {
    ordered_json synth = {{"rows", c.synth.rows}, {"seed", c.synth.seed},
                          {"sd_to_mean", c.synth.sd_to_mean}};
    if (!c.synth.meta_path.empty()) synth["meta"] = c.synth.meta_path.string();
    if (!c.synth.corr_path.empty()) synth["corr"] = c.synth.corr_path.string();
    doc["data"] = {{"synth", synth}};
  }
  doc["repetitions"] = c.repetitions;
  doc["train_fraction"] = c.train_fraction;
  doc["seed"] = c.seed;
  doc["mlp"] = {{"hidden", c.hidden_units}, {"lm_epochs", c.lm_epochs}, {"lm_damping", c.lm_damping}};
  doc["woa"] = {{"population", c.woa_population},
                {"iterations", c.woa_iterations},
                {"spiral_b", c.woa_spiral_b},
                {"weight_lower", c.weight_lower},
                {"weight_upper", c.weight_upper},
                {"frozen_l", optional_json(c.woa_frozen_l)},
                {"frozen_p", optional_json(c.woa_frozen_p)},
                {"lm_refine", c.woa_lm_refine}};
  doc["hybrid_per_repetition"] = c.hybrid_per_repetition;
  doc["output_dir"] = c.output_dir.string();
  doc["jobs"] = c.jobs;
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

}  // namespace windwoa::harness
