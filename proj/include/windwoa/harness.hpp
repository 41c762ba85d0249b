#pragma once

// Leave-one-station-out experiment protocol: for every target station,
// repeated random splits with a baseline network trained on each, selection
// of the best split, and a whale-optimized network trained on that split.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "windwoa/config.hpp"
#include "windwoa/dataset.hpp"
#include "windwoa/hybrid.hpp"
#include "windwoa/metrics.hpp"

namespace windwoa::harness {

struct PhaseReports {
  metrics::MetricReport training;
  metrics::MetricReport testing;
};

/// A trained model together with its scores and test-phase series (m/s).
struct ModelOutcome {
  hybrid::TrainedModel model;
  PhaseReports reports;
  std::uint64_t split_seed = 0;
  std::vector<double> test_observed;
  std::vector<double> test_predicted;
};

struct RepetitionRecord {
  std::size_t task = 0;        // 0-based task index
  std::string target;
  std::size_t repetition = 0;  // 1-based
  std::uint64_t split_seed = 0;
  std::optional<PhaseReports> baseline;
  std::optional<PhaseReports> hybrid;
  bool selected = false;
  std::string error;  // empty when training succeeded
};

struct TaskResult {
  data::LooTask task;
  std::vector<RepetitionRecord> records;
  std::optional<std::size_t> selected_repetition;  // 1-based
  std::optional<ModelOutcome> baseline;
  std::optional<ModelOutcome> hybrid;
  bool failed = false;
  std::string failure;
  std::size_t baseline_trainings = 0;
  std::size_t hybrid_trainings = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::string> stations;
  std::size_t rows = 0;
  std::size_t dropped_rows = 0;
  std::vector<TaskResult> tasks;  // in task order

  bool any_failed() const;
};

/// Seed of the random split for (task, repetition). Independent of how many
/// tasks or repetitions exist.
std::uint64_t split_seed(std::uint64_t master_seed, std::size_t task_index, std::size_t repetition);

/// Highest test R2; ties go to the lower test RMSE, then the earlier
/// repetition. Records without a baseline or with undefined R2 rank last.
/// Returns an index into `records`, or nothing if no record is usable.
std::optional<std::size_t> select_repetition(std::span<const RepetitionRecord> records);

data::StationFrame load_frame(const ExperimentConfig& config);

TaskResult run_task(const data::LooTask& task, const data::StationFrame& frame,
                    const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config, const data::StationFrame& frame);
ExperimentReport run_experiment(const ExperimentConfig& config);

/// One row per model id with training and testing metric blocks.
void write_report_csv(const ExperimentReport& report, std::ostream& out);
/// One RepetitionRecord per line, task order then repetition order.
void write_records_jsonl(const ExperimentReport& report, std::ostream& out);
/// Per-task test RMSE of both models and their difference.
void write_comparison_csv(const ExperimentReport& report, std::ostream& out);
nlohmann::ordered_json manifest_json(const ExperimentReport& report);

/// plots/scatter_<model>.csv, plots/bar_<metric>.csv, manifest.json.
void emit_plot_data(const ExperimentReport& report, const std::filesystem::path& outdir);
/// Everything: report.csv, records.jsonl, comparison.csv, models/, plots/, manifest.json.
void write_outputs(const ExperimentReport& report, const std::filesystem::path& outdir);

}  // namespace windwoa::harness
