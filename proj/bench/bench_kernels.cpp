// Serial reference vs OpenMP kernels on the shapes a default run uses:
// a 9-8-1 network over ~2500 training rows and a WOA population of 30.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "windwoa/hybrid.hpp"
#include "windwoa/lm.hpp"
#include "windwoa/mlp.hpp"
#include "windwoa/rng.hpp"
#include "windwoa/woa.hpp"

using namespace windwoa;

namespace {

const mlp::SampleSet& training_set() {
  static const mlp::SampleSet set = [] {
    Rng rng(1);
    mlp::SampleSet s;
    s.features.resize(2520, 9);
    for (Eigen::Index i = 0; i < s.features.size(); ++i) s.features.data()[i] = uniform(rng, -2, 2);
    s.targets = s.features.rowwise().mean();
    return s;
  }();
  return set;
}

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) ? ExecPolicy::parallel : ExecPolicy::serial;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) ? "openmp x" + std::to_string(omp_get_max_threads()) : "serial");
}

void BM_PredictBatch(benchmark::State& state) {
  const mlp::Topology t;
  const auto p = mlp::init_params(t, 3);
  const auto& s = training_set();
  for (auto _ : state) benchmark::DoNotOptimize(mlp::predict_batch(t, p, s.features, policy_of(state)));
  state.SetItemsProcessed(state.iterations() * s.features.rows());
  label(state);
}

void BM_Jacobian(benchmark::State& state) {
  const mlp::Topology t;
  const auto p = mlp::init_params(t, 3);
  const auto& s = training_set();
  for (auto _ : state) benchmark::DoNotOptimize(mlp::output_jacobian(t, p, s.features, policy_of(state)));
  state.SetItemsProcessed(state.iterations() * s.features.rows());
  label(state);
}

void BM_LmEpochs(benchmark::State& state) {
  const mlp::Topology t;
  mlp::LmOptions opts{.epochs = 10, .policy = policy_of(state)};
  for (auto _ : state) benchmark::DoNotOptimize(mlp::lm_train(t, mlp::init_params(t, 3), training_set(), opts));
  label(state);
}

void BM_WoaPopulation(benchmark::State& state) {
  const mlp::Topology t;
  const auto& s = training_set();
  Rng rng(5);
  std::vector<woa::Vector> positions(30, woa::Vector(89));
  for (auto& x : positions)
    for (auto& v : x) v = uniform(rng, -5, 5);
  std::vector<double> fitness(30);
  const woa::ObjectiveFunction f = [&](const woa::Vector& x) { return hybrid::mlp_fitness(x, t, s); };
  for (auto _ : state) {
    woa::evaluate_positions(f, positions, fitness, policy_of(state));
    benchmark::DoNotOptimize(fitness.data());
  }
  state.SetItemsProcessed(state.iterations() * 30);
  label(state);
}

}  // namespace

BENCHMARK(BM_PredictBatch)->Arg(0)->Arg(1);
BENCHMARK(BM_Jacobian)->Arg(0)->Arg(1);
BENCHMARK(BM_LmEpochs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WoaPopulation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
