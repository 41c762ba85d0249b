#include "windwoa/harness.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "windwoa/error.hpp"
#include "windwoa/model_io.hpp"
#include "windwoa/rng.hpp"
#include "windwoa/synth.hpp"

namespace windwoa::harness {

namespace {

using nlohmann::ordered_json;

struct PreparedSplit {
  data::SplitSpec split;
  mlp::Scaling scaling;
  mlp::SampleSet train;
  mlp::SampleSet test;
  Eigen::VectorXd train_observed;  // m/s
  Eigen::VectorXd test_observed;   // m/s
};

struct RepetitionOutcome {
  RepetitionRecord record;
  std::optional<ModelOutcome> baseline;
  std::optional<ModelOutcome> hybrid;
  bool baseline_attempted = false;
  bool hybrid_attempted = false;
};

mlp::Topology topology_for(const data::LooTask& task, const ExperimentConfig& config) {
  mlp::Topology t;
  t.n_inputs = task.reference_columns.size();
  t.n_hidden = config.hidden_units;
  t.n_outputs = 1;
  return t;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& values, std::span<const std::size_t> rows,
                       std::span<const std::size_t> cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          values(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
  return out;
}

PreparedSplit prepare(const data::LooTask& task, const data::StationFrame& frame,
                      const ExperimentConfig& config, std::uint64_t seed) {
  PreparedSplit p;
  p.split = data::random_split(frame.row_count(), config.train_fraction, seed);
  const std::vector<std::size_t> target_col{task.target_column};
  const std::vector<std::string> target_name{task.target};
  p.scaling.features =
      data::fit_normalizer(frame.records, p.split.train_indices, task.reference_columns, task.references);
  p.scaling.target = data::fit_normalizer(frame.records, p.split.train_indices, target_col, target_name);

  auto build = [&](const std::vector<std::size_t>& rows, mlp::SampleSet& set, Eigen::VectorXd& observed) {
    set.features = p.scaling.features.apply(gather(frame.records, rows, task.reference_columns));
    observed = gather(frame.records, rows, target_col).col(0);
    set.targets = p.scaling.target.apply_column(0, observed);
  };
  build(p.split.train_indices, p.train, p.train_observed);
  build(p.split.test_indices, p.test, p.test_observed);
  return p;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

ModelOutcome evaluate(hybrid::TrainedModel model, const PreparedSplit& p) {
  model.scaling = p.scaling;
  auto predict = [&](const mlp::SampleSet& set) {
    return p.scaling.target.invert_column(0, mlp::predict_batch(model.topology, model.params, set.features));
  };
  ModelOutcome out;
  out.split_seed = p.split.seed;
  out.reports.training =
      metrics::metric_report(metrics::PredictionPair(to_std(p.train_observed), to_std(predict(p.train))));
  out.test_observed = to_std(p.test_observed);
  out.test_predicted = to_std(predict(p.test));
  out.reports.testing = metrics::metric_report(metrics::PredictionPair(out.test_observed, out.test_predicted));
  out.model = std::move(model);
  return out;
}

ModelOutcome train_baseline(const data::LooTask& task, const PreparedSplit& p,
                            const ExperimentConfig& config) {
  mlp::LmOptions lm;
  lm.epochs = config.lm_epochs;
  lm.damping_init = config.lm_damping;
  return evaluate(hybrid::train_mlp_baseline(topology_for(task, config), p.train,
                                             derive_seed(p.split.seed, {1}), lm),
                  p);
}

ModelOutcome train_hybrid(const data::LooTask& task, const PreparedSplit& p,
                          const ExperimentConfig& config) {
  const mlp::Topology topology = topology_for(task, config);
  woa::WoaConfig woa = hybrid::default_woa_config(topology, derive_seed(p.split.seed, {2}));
  woa.population_size = config.woa_population;
  woa.max_iterations = config.woa_iterations;
  woa.spiral_constant_b = config.woa_spiral_b;
  woa.bounds = woa::Bounds::uniform(topology.parameter_count(), config.weight_lower, config.weight_upper);
  woa.frozen_l = config.woa_frozen_l;
  woa.frozen_p = config.woa_frozen_p;
  hybrid::WoaTrainingOptions options;
  options.lm_refine = config.woa_lm_refine;
  options.refine.epochs = config.lm_epochs;
  options.refine.damping_init = config.lm_damping;
  return evaluate(hybrid::train_mlp_woa(topology, p.train, woa, options), p);
}

RepetitionOutcome run_repetition(const data::LooTask& task, const data::StationFrame& frame,
                                 const ExperimentConfig& config, std::size_t repetition) {
  RepetitionOutcome out;
  out.record.task = task.index;
  out.record.target = task.target;
  out.record.repetition = repetition;
  out.record.split_seed = split_seed(config.seed, task.index, repetition);
  try {
    const PreparedSplit p = prepare(task, frame, config, out.record.split_seed);
    out.baseline_attempted = true;
    out.baseline = train_baseline(task, p, config);
    out.record.baseline = out.baseline->reports;
    if (config.hybrid_per_repetition) {
      out.hybrid_attempted = true;
      out.hybrid = train_hybrid(task, p, config);
      out.record.hybrid = out.hybrid->reports;
    }
  } catch (const std::exception& e) {
    out.record.error = e.what();
  }
  return out;
}

TaskResult finish_task(const data::LooTask& task, const data::StationFrame& frame,
                       const ExperimentConfig& config, std::vector<RepetitionOutcome> outcomes) {
  TaskResult result;
  result.task = task;
  for (const auto& o : outcomes) {
    result.records.push_back(o.record);
    result.baseline_trainings += o.baseline_attempted ? 1 : 0;
    result.hybrid_trainings += o.hybrid_attempted ? 1 : 0;
  }
  const std::optional<std::size_t> chosen = select_repetition(result.records);
  if (!chosen) {
    result.failed = true;
    result.failure = "no repetition trained successfully";
    if (!result.records.empty() && !result.records.front().error.empty())
      result.failure += ": " + result.records.front().error;
    return result;
  }
  RepetitionOutcome& sel = outcomes[*chosen];
  RepetitionRecord& rec = result.records[*chosen];
  rec.selected = true;
  result.selected_repetition = rec.repetition;
  result.baseline = std::move(sel.baseline);

  if (config.hybrid_per_repetition) {
    result.hybrid = std::move(sel.hybrid);
  } else {
    try {
      const PreparedSplit p = prepare(task, frame, config, rec.split_seed);
      ++result.hybrid_trainings;
      result.hybrid = train_hybrid(task, p, config);
      rec.hybrid = result.hybrid->reports;
    } catch (const std::exception& e) {
      rec.error = std::string("hybrid: ") + e.what();
    }
  }
  if (!result.hybrid) {
    result.failed = true;
    result.failure = rec.error.empty() ? "hybrid training failed" : rec.error;
  }
  return result;
}

ordered_json phase_json(const std::optional<PhaseReports>& r, const std::string& model,
                        std::optional<std::uint64_t> seed) {
  if (!r) return nullptr;
  ordered_json j;
  j["model"] = model;
  if (seed) j["split_seed"] = *seed;
  j["training"] = metrics::to_json(r->training);
  j["testing"] = metrics::to_json(r->testing);
  return j;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw Error("cannot create output directory " + dir.string());
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Report rows: all baselines, then all hybrids.
struct ModelRow {
  const TaskResult* task;
  const std::optional<ModelOutcome>* outcome;
  std::string id;
  hybrid::Trainer trainer;
};

std::vector<ModelRow> model_rows(const ExperimentReport& report) {
  std::vector<ModelRow> rows;
  for (const auto& t : report.tasks)
    rows.push_back({&t, &t.baseline, t.task.baseline_id, hybrid::Trainer::mlp_lma});
  for (const auto& t : report.tasks)
    rows.push_back({&t, &t.hybrid, t.task.hybrid_id, hybrid::Trainer::mlp_woa});
  return rows;
}

}  // namespace

bool ExperimentReport::any_failed() const {
  for (const auto& t : tasks)
    if (t.failed) return true;
  return false;
}

std::uint64_t split_seed(std::uint64_t master_seed, std::size_t task_index, std::size_t repetition) {
  return derive_seed(master_seed, {task_index, repetition});
}

std::optional<std::size_t> select_repetition(std::span<const RepetitionRecord> records) {
  std::optional<std::size_t> best;
  auto better = [](const RepetitionRecord& a, const RepetitionRecord& b) {
    const double r2a = *a.baseline->testing.r_squared;
    const double r2b = *b.baseline->testing.r_squared;
    if (r2a != r2b) return r2a > r2b;
    const double ea = *a.baseline->testing.rmse;
    const double eb = *b.baseline->testing.rmse;
    if (ea != eb) return ea < eb;
    return a.repetition < b.repetition;
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.baseline || !r.baseline->testing.r_squared || !r.baseline->testing.rmse) continue;
    if (!best || better(r, records[*best])) best = i;
  }
  return best;
}

data::StationFrame load_frame(const ExperimentConfig& config) {
  if (config.data_path) return data::load_csv(*config.data_path);
  const auto meta_path = config.synth.meta_path.empty() ? data::bundled_meta_path() : config.synth.meta_path;
  const auto corr_path = config.synth.corr_path.empty() ? data::bundled_corr_path() : config.synth.corr_path;
  const auto metas = data::load_station_meta(meta_path);
  std::vector<std::string> names;
  for (const auto& m : metas) names.push_back(m.name);
  const Eigen::MatrixXd corr = data::load_correlation(corr_path, names);
  data::SynthOptions options;
  options.sd_to_mean = config.synth.sd_to_mean;
  return data::synth_generate(metas, corr, config.synth.rows, config.synth.seed, options);
}

TaskResult run_task(const data::LooTask& task, const data::StationFrame& frame,
                    const ExperimentConfig& config) {
  config.validate();
  std::vector<RepetitionOutcome> outcomes(config.repetitions);
  const auto n = static_cast<std::ptrdiff_t>(config.repetitions);
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(config.jobs))
  for (std::ptrdiff_t r = 0; r < n; ++r)
    outcomes[static_cast<std::size_t>(r)] =
        run_repetition(task, frame, config, static_cast<std::size_t>(r) + 1);
  return finish_task(task, frame, config, std::move(outcomes));
}

ExperimentReport run_experiment(const ExperimentConfig& config, const data::StationFrame& frame) {
  config.validate();
  frame.validate();
  const std::vector<data::LooTask> tasks = data::build_loo_tasks(frame);
  const std::size_t n_tasks = tasks.size();
  const std::size_t reps = config.repetitions;
  const int threads = static_cast<int>(config.jobs);

  // Every (task, repetition) unit is seeded independently, so the schedule
  // cannot change any result.
  std::vector<std::vector<RepetitionOutcome>> outcomes(n_tasks, std::vector<RepetitionOutcome>(reps));
  const auto units = static_cast<std::ptrdiff_t>(n_tasks * reps);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t u = 0; u < units; ++u) {
    const auto t = static_cast<std::size_t>(u) / reps;
    const auto r = static_cast<std::size_t>(u) % reps;
    outcomes[t][r] = run_repetition(tasks[t], frame, config, r + 1);
  }

  ExperimentReport report;
  report.config = config;
  report.stations = frame.station_names();
  report.rows = frame.row_count();
  report.dropped_rows = frame.dropped_rows;
  report.tasks.resize(n_tasks);
  const auto count = static_cast<std::ptrdiff_t>(n_tasks);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    const auto i = static_cast<std::size_t>(t);
    report.tasks[i] = finish_task(tasks[i], frame, config, std::move(outcomes[i]));
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  return run_experiment(config, load_frame(config));
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
  out << "model,target_station,trainer,status,selected_repetition";
  for (const char* phase : {"train", "test"})
    for (const auto& c : metrics::report_columns()) out << ',' << phase << '_' << c;
  out << '\n';
  const std::vector<std::string> undefined(metrics::report_columns().size(), metrics::kUndefined);
  for (const auto& row : model_rows(report)) {
    const auto& outcome = *row.outcome;
    out << row.id << ',' << row.task->task.target << ',' << hybrid::trainer_name(row.trainer) << ','
        << (outcome ? "ok" : "failed") << ','
        << (row.task->selected_repetition ? std::to_string(*row.task->selected_repetition)
                                          : std::string(metrics::kUndefined));
    for (auto phase : {&PhaseReports::training, &PhaseReports::testing}) {
      const auto cells = outcome ? metrics::report_cells((*outcome).reports.*phase) : undefined;
      for (const auto& c : cells) out << ',' << c;
    }
    out << '\n';
  }
}

void write_records_jsonl(const ExperimentReport& report, std::ostream& out) {
  for (const auto& t : report.tasks) {
    for (const auto& r : t.records) {
      ordered_json j;
      j["task"] = r.task + 1;
      j["target"] = r.target;
      j["repetition"] = r.repetition;
      j["split_seed"] = r.split_seed;
      j["selected"] = r.selected;
      j["baseline"] = phase_json(r.baseline, t.task.baseline_id, std::nullopt);
      const bool hybrid_here = r.hybrid.has_value();
      j["hybrid"] = phase_json(r.hybrid, t.task.hybrid_id,
                               hybrid_here ? std::optional<std::uint64_t>(r.split_seed) : std::nullopt);
      j["error"] = r.error.empty() ? ordered_json(nullptr) : ordered_json(r.error);
      out << j.dump() << '\n';
    }
  }
}

void write_comparison_csv(const ExperimentReport& report, std::ostream& out) {
  out << "task,target_station,selected_repetition,split_seed,mlp_test_rmse,mlp_woa_test_rmse,"
         "delta_rmse,hybrid_not_worse\n";
  for (const auto& t : report.tasks) {
    out << t.task.index + 1 << ',' << t.task.target << ',';
    if (t.failed || !t.baseline || !t.hybrid) {
      out << "undefined,undefined,undefined,undefined,undefined,undefined\n";
      continue;
    }
    const double b = *t.baseline->reports.testing.rmse;
    const double h = *t.hybrid->reports.testing.rmse;
    out << *t.selected_repetition << ',' << t.hybrid->split_seed << ',' << fmt_double(b) << ','
        << fmt_double(h) << ',' << fmt_double(h - b) << ',' << (h <= b ? "yes" : "no") << '\n';
  }
}

nlohmann::ordered_json manifest_json(const ExperimentReport& report) {
  ordered_json m;
  m["manifest_version"] = 1;
  m["tool"] = "windwoa";
  m["version"] = WINDWOA_VERSION;
  m["config"] = to_json(report.config);
  m["data"] = {{"rows", report.rows}, {"dropped_rows", report.dropped_rows}, {"stations", report.stations}};
  ordered_json tasks = ordered_json::array();
  for (const auto& t : report.tasks) {
    ordered_json j;
    j["task"] = t.task.index + 1;
    j["target"] = t.task.target;
    j["references"] = t.task.references;
    j["models"] = {t.task.baseline_id, t.task.hybrid_id};
    j["selected_repetition"] =
        t.selected_repetition ? ordered_json(*t.selected_repetition) : ordered_json(nullptr);
    j["split_seed"] = t.baseline ? ordered_json(t.baseline->split_seed) : ordered_json(nullptr);
    j["failed"] = t.failed;
    if (t.failed) j["failure"] = t.failure;
    tasks.push_back(std::move(j));
  }
  m["tasks"] = std::move(tasks);
  return m;
}

void emit_plot_data(const ExperimentReport& report, const std::filesystem::path& outdir) {
  const auto plots = outdir / "plots";
  ensure_dir(plots);
  const auto rows = model_rows(report);
  for (const auto& row : rows) {
    if (!*row.outcome) continue;
    const ModelOutcome& o = **row.outcome;
    auto out = open_out(plots / ("scatter_" + row.id + ".csv"));
    out << "observed,predicted\n";
    for (std::size_t i = 0; i < o.test_observed.size(); ++i)
      out << fmt_double(o.test_observed[i]) << ',' << fmt_double(o.test_predicted[i]) << '\n';
  }
  const auto& columns = metrics::report_columns();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    auto out = open_out(plots / ("bar_" + columns[c] + ".csv"));
    out << "model," << columns[c] << '\n';
    for (const auto& row : rows) {
      const std::string v = *row.outcome ? metrics::report_cells((**row.outcome).reports.testing)[c]
                                         : std::string(metrics::kUndefined);
      out << row.id << ',' << v << '\n';
    }
  }
  auto manifest = open_out(outdir / "manifest.json");
  manifest << manifest_json(report).dump(2) << '\n';
}

void write_outputs(const ExperimentReport& report, const std::filesystem::path& outdir) {
  ensure_dir(outdir);
  {
    auto out = open_out(outdir / "report.csv");
    write_report_csv(report, out);
  }
  {
    auto out = open_out(outdir / "records.jsonl");
    write_records_jsonl(report, out);
  }
  {
    auto out = open_out(outdir / "comparison.csv");
    write_comparison_csv(report, out);
  }
  ensure_dir(outdir / "models");
  for (const auto& row : model_rows(report)) {
    if (!*row.outcome) continue;
    mlp::save_model((**row.outcome).model.stored(), outdir / "models" / (row.id + ".json"));
  }
  emit_plot_data(report, outdir);
}

}  // namespace windwoa::harness
