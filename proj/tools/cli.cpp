#include "cli.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "windwoa/benchmarks.hpp"
#include "windwoa/error.hpp"
#include "windwoa/harness.hpp"
#include "windwoa/metrics.hpp"
#include "windwoa/synth.hpp"
#include "windwoa/woa.hpp"

namespace windwoa::cli {

namespace {

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> jobs;
};

struct SynthArgs {
  std::size_t rows = 3600;
  std::uint64_t seed = 7;
  std::string out;
  std::string meta;
  std::string corr;
};

struct EvalArgs {
  std::string input;
  bool json = false;
};

struct BenchArgs {
  std::string function;
  std::size_t dim = 10;
  std::size_t iters = 500;
  std::size_t pop = 30;
  std::size_t seeds = 10;
  std::uint64_t seed = 1;
  std::string out;
};

int do_run(const RunArgs& a, std::ostream& out) {
  harness::ExperimentConfig config =
      a.config.empty() ? harness::ExperimentConfig{} : harness::load_config(a.config);
  if (a.seed) config.seed = *a.seed;
  if (a.jobs) config.jobs = *a.jobs;
  if (!a.out.empty()) config.output_dir = a.out;
  config.validate();

  const data::StationFrame frame = harness::load_frame(config);
  const harness::ExperimentReport report = harness::run_experiment(config, frame);
  harness::write_outputs(report, config.output_dir);

  std::size_t wins = 0, compared = 0;
  for (const auto& t : report.tasks) {
    if (t.failed) continue;
    ++compared;
    if (*t.hybrid->reports.testing.rmse <= *t.baseline->reports.testing.rmse) ++wins;
  }
  out << "stations: " << report.stations.size() << ", rows: " << report.rows
      << " (dropped " << report.dropped_rows << ")\n"
      << "hybrid test RMSE <= baseline in " << wins << " of " << compared << " tasks\n"
      << "outputs written to " << config.output_dir.string() << '\n';
  return report.any_failed() ? kRuntimeFailure : kOk;
}

int do_synth(const SynthArgs& a, std::ostream& out) {
  const auto meta_path = a.meta.empty() ? data::bundled_meta_path() : std::filesystem::path(a.meta);
  const auto corr_path = a.corr.empty() ? data::bundled_corr_path() : std::filesystem::path(a.corr);
  const auto metas = data::load_station_meta(meta_path);
  std::vector<std::string> names;
  for (const auto& m : metas) names.push_back(m.name);
  const auto frame = data::synth_generate(metas, data::load_correlation(corr_path, names), a.rows, a.seed);
  if (a.out.empty() || a.out == "-") {
    data::write_csv(frame, out);
  } else {
    data::write_csv(frame, std::filesystem::path(a.out));
  }
  return kOk;
}

int do_eval(const EvalArgs& a, std::ostream& out) {
  std::ifstream in(a.input);
  if (!in) throw DataError("cannot open " + a.input);
  std::string line;
  std::vector<double> observed, predicted;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t col_o = 0, col_p = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::string f;
    std::istringstream ss(line);
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!header_seen) {
      header_seen = true;
      const auto o = std::find(fields.begin(), fields.end(), "observed");
      const auto p = std::find(fields.begin(), fields.end(), "predicted");
      if (o == fields.end() || p == fields.end())
        throw DataError(a.input + ": header must contain 'observed' and 'predicted'");
      col_o = static_cast<std::size_t>(o - fields.begin());
      col_p = static_cast<std::size_t>(p - fields.begin());
      continue;
    }
    if (fields.size() <= std::max(col_o, col_p))
      throw DataError(a.input + ":" + std::to_string(line_no) + ": too few cells");
    try {
      observed.push_back(std::stod(fields[col_o]));
      predicted.push_back(std::stod(fields[col_p]));
    } catch (const std::exception&) {
      throw DataError(a.input + ":" + std::to_string(line_no) + ": non-numeric cell");
    }
  }
  if (observed.empty()) throw DataError(a.input + ": no data rows");
  metrics::MetricReport report;
  try {
    report = metrics::metric_report(metrics::PredictionPair(observed, predicted));
  } catch (const ContractViolation& e) {
    throw DataError(a.input + ": " + e.what());
  }
  if (a.json) {
    out << metrics::to_json(report).dump(2) << '\n';
  } else {
    const auto& cols = metrics::report_columns();
    const auto cells = metrics::report_cells(report);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }
  return kOk;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int do_bench(const BenchArgs& a, std::ostream& out) {
  const auto fn = woa::find_test_function(a.function);
  if (!fn) throw ConfigError("unknown test function '" + a.function + "' (sphere, rosenbrock, rastrigin)");
  if (a.seeds < 1) throw ConfigError("--seeds must be >= 1");
  if (!a.out.empty()) std::filesystem::create_directories(a.out);

  std::vector<double> woa_best, random_best;
  out << "seed,woa_best,random_search_best\n";
  for (std::size_t k = 0; k < a.seeds; ++k) {
    woa::WoaConfig config;
    config.population_size = a.pop;
    config.max_iterations = a.iters;
    config.seed = derive_seed(a.seed, {k});
    config.bounds = woa::Bounds::uniform(a.dim, fn->lower, fn->upper);
    const woa::WoaResult r = woa::woa_optimize(config, fn->fn);

    // Uniform random search with the same evaluation budget.
    Rng rng(derive_seed(config.seed, {0xbad5eed}));
    double rs = std::numeric_limits<double>::infinity();
    woa::Vector x(static_cast<Eigen::Index>(a.dim));
    for (std::size_t e = 0; e < r.evaluations; ++e) {
      for (Eigen::Index d = 0; d < x.size(); ++d) x[d] = uniform(rng, fn->lower, fn->upper);
      rs = std::min(rs, fn->fn(x));
    }
    woa_best.push_back(r.best_fitness);
    random_best.push_back(rs);
    out << k << ',' << r.best_fitness << ',' << rs << '\n';
    if (!a.out.empty())
      woa::write_trace_csv(std::filesystem::path(a.out) /
                               ("trace_" + a.function + "_seed" + std::to_string(k) + ".csv"),
                           r.history);
  }
  out << "median," << median(woa_best) << ',' << median(random_best) << '\n';
  return kOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Whale-optimized MLP wind-speed prediction toolkit", "windwoa"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run the leave-one-station-out experiment");
  run->add_option("--config", run_args.config, "Experiment config (JSON) or run manifest");
  run->add_option("--seed", run_args.seed, "Master seed (overrides config)");
  run->add_option("--out", run_args.out, "Output directory (overrides config)");
  run->add_option("--jobs", run_args.jobs, "Worker threads")->check(CLI::PositiveNumber);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic multi-station CSV");
  synth->add_option("--rows", synth_args.rows, "Number of rows")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_args.seed, "Generator seed");
  synth->add_option("--out", synth_args.out, "Output CSV path (stdout if omitted)");
  synth->add_option("--meta", synth_args.meta, "Station table (default: bundled)");
  synth->add_option("--corr", synth_args.corr, "Correlation table (default: bundled)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Score an observed/predicted CSV");
  eval->add_option("input,--input", eval_args.input, "CSV with observed and predicted columns")->required();
  eval->add_flag("--json", eval_args.json, "Print JSON instead of CSV");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("woa-bench", "Run WOA on a benchmark function");
  bench->add_option("function", bench_args.function, "sphere | rosenbrock | rastrigin")->required();
  bench->add_option("--dim", bench_args.dim, "Dimension")->check(CLI::PositiveNumber);
  bench->add_option("--iters", bench_args.iters, "Iterations")->check(CLI::PositiveNumber);
  bench->add_option("--pop", bench_args.pop, "Population size");
  bench->add_option("--seeds", bench_args.seeds, "Number of seeds");
  bench->add_option("--seed", bench_args.seed, "Base seed");
  bench->add_option("--out", bench_args.out, "Directory for convergence traces");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*run) return do_run(run_args, out);
    if (*synth) return do_synth(synth_args, out);
    if (*eval) return do_eval(eval_args, out);
    if (*bench) return do_bench(bench_args, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const ContractViolation& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsage;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace windwoa::cli
