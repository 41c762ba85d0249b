#include "windwoa/woa.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "windwoa/error.hpp"

namespace windwoa::woa {

namespace {

constexpr double kInfeasible = std::numeric_limits<double>::infinity();

// Index of the lowest fitness; the first one wins ties.
std::size_t argmin_fitness(const std::vector<SearchAgent>& population) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < population.size(); ++i)
    if (population[i].fitness < population[best].fitness) best = i;
  return best;
}

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) throw ContractViolation(std::string(what) + ": dimension mismatch");
}

}  // namespace

Bounds::Bounds(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() < 1 || lower_.size() != upper_.size())
    throw ContractViolation("bounds: lower and upper must have equal length >= 1");
  for (Eigen::Index d = 0; d < lower_.size(); ++d)
    if (!(lower_[d] < upper_[d]))
      throw ContractViolation("bounds: lower < upper violated in dimension " + std::to_string(d));
}

Bounds Bounds::uniform(std::size_t dim, double lower, double upper) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Bounds(Vector::Constant(n, lower), Vector::Constant(n, upper));
}

bool Bounds::contains(const Vector& x) const {
  if (x.size() != lower_.size()) return false;
  return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

void WoaConfig::validate() const {
  if (population_size < 2) throw ContractViolation("woa: population_size must be >= 2");
  if (max_iterations < 1) throw ContractViolation("woa: max_iterations must be >= 1");
  if (!(spiral_constant_b > 0.0)) throw ContractViolation("woa: spiral constant b must be > 0");
  if (bounds.dim() < 1) throw ContractViolation("woa: bounds are not set");
  if (frozen_l && !(*frozen_l >= -1.0 && *frozen_l <= 1.0))
    throw ContractViolation("woa: frozen l must lie in [-1, 1]");
  if (frozen_p && !(*frozen_p >= 0.0 && *frozen_p <= 1.0))
    throw ContractViolation("woa: frozen p must lie in [0, 1]");
}

double decay_a(std::size_t t, std::size_t max_iterations) {
  if (max_iterations == 0 || t > max_iterations)
    throw ContractViolation("decay_a: require 0 <= t <= max_iterations, max_iterations >= 1");
  return 2.0 - static_cast<double>(t) * 2.0 / static_cast<double>(max_iterations);
}

Coefficients coefficients_from_r(double a, Vector r) {
  Coefficients c;
  c.A = 2.0 * a * r.array() - a;
  c.C = 2.0 * r;
  c.r = std::move(r);
  return c;
}

Coefficients coefficient_vectors(double a, std::size_t dim, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vector r(static_cast<Eigen::Index>(dim));
  for (Eigen::Index d = 0; d < r.size(); ++d) r[d] = u01(rng);
  return coefficients_from_r(a, std::move(r));
}

Vector encircle_step(const Vector& agent, const Vector& best, const Vector& A, const Vector& C) {
  require_same_dim(agent, best, "encircle_step");
  require_same_dim(agent, A, "encircle_step");
  require_same_dim(agent, C, "encircle_step");
  const Vector distance = (C.cwiseProduct(best) - agent).cwiseAbs();
  return best - A.cwiseProduct(distance);
}

Vector spiral_step(const Vector& agent, const Vector& best, double b, double l) {
  require_same_dim(agent, best, "spiral_step");
  const Vector distance = (best - agent).cwiseAbs();
  return distance * (std::exp(b * l) * std::cos(2.0 * std::numbers::pi * l)) + best;
}

Vector explore_step(const Vector& agent, const Vector& random_agent, const Vector& A,
                    const Vector& C) {
  return encircle_step(agent, random_agent, A, C);
}

Move choose_move(double p, const Vector& A) {
  if (p >= 0.5) return Move::spiral;
  return std::abs(A[0]) < 1.0 ? Move::encircle : Move::explore;
}

void evaluate_positions(const ObjectiveFunction& objective, std::span<const Vector> positions,
                        std::span<double> fitness, ExecPolicy policy) {
  if (positions.size() != fitness.size())
    throw ContractViolation("evaluate_positions: output size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(positions.size());
  auto eval = [&](std::ptrdiff_t i) {
    const double f = objective(positions[static_cast<std::size_t>(i)]);
    fitness[static_cast<std::size_t>(i)] = std::isfinite(f) ? f : kInfeasible;
  };
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) eval(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) eval(i);
  }
}

WoaState initialize_population(const WoaConfig& config, const ObjectiveFunction& objective) {
  config.validate();
  const auto& bounds = config.bounds;
  const auto dim = static_cast<Eigen::Index>(bounds.dim());

  std::vector<Vector> positions(config.population_size, Vector(dim));
  for (std::size_t i = 0; i < config.population_size; ++i) {
    Rng rng(derive_seed(config.seed, {0, i}));
    for (Eigen::Index d = 0; d < dim; ++d)
      positions[i][d] = uniform(rng, bounds.lower()[d], bounds.upper()[d]);
  }
  std::vector<double> fitness(config.population_size);
  evaluate_positions(objective, positions, fitness, config.policy);

  WoaState state;
  state.population.reserve(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i)
    state.population.push_back({std::move(positions[i]), fitness[i]});
  state.evaluations = config.population_size;

  const std::size_t best = argmin_fitness(state.population);
  if (!std::isfinite(state.population[best].fitness))
    throw InitializationError("woa: objective is non-finite for every initial agent");
  state.best = state.population[best];
  state.iteration = 0;
  state.a = decay_a(0, config.max_iterations);
  state.history.push_back(state.best.fitness);
  return state;
}

WoaState woa_step(WoaState state, const WoaConfig& config, const ObjectiveFunction& objective) {
  if (state.iteration >= config.max_iterations)
    throw ContractViolation("woa_step: iteration budget exhausted");
  const std::size_t n = state.population.size();
  const std::size_t dim = config.bounds.dim();
  const double a = decay_a(state.iteration, config.max_iterations);
  state.a = a;

  // Synchronous update: every candidate is computed from the population as it
  // stood at the start of the iteration, each agent with its own RNG stream.
  std::vector<Vector> candidates(n);
  auto propose = [&](std::size_t i) {
    Rng rng(derive_seed(config.seed, {state.iteration + 1, i}));
    const Coefficients coef = coefficient_vectors(a, dim, rng);
    const double p_draw = uniform(rng, 0.0, 1.0);
    const double l_draw = uniform(rng, -1.0, 1.0);
    const std::size_t partner = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const double p = config.frozen_p.value_or(p_draw);
    const double l = config.frozen_l.value_or(l_draw);

    const Vector& x = state.population[i].position;
    Vector next;
    switch (choose_move(p, coef.A)) {
      case Move::encircle:
        next = encircle_step(x, state.best.position, coef.A, coef.C);
        break;
      case Move::explore:
        next = explore_step(x, state.population[partner].position, coef.A, coef.C);
        break;
      case Move::spiral:
        next = spiral_step(x, state.best.position, config.spiral_constant_b, l);
        break;
    }
    candidates[i] = config.bounds.clamp(next);
  };
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (config.policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) propose(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) propose(i);
  }

  std::vector<double> fitness(n);
  evaluate_positions(objective, candidates, fitness, config.policy);
  state.evaluations += n;

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(fitness[i])) continue;  // infeasible: agent stays put
    state.population[i].position = std::move(candidates[i]);
    state.population[i].fitness = fitness[i];
  }
  const std::size_t best = argmin_fitness(state.population);
  if (state.population[best].fitness < state.best.fitness) state.best = state.population[best];

  ++state.iteration;
  state.a = decay_a(state.iteration, config.max_iterations);
  state.history.push_back(state.best.fitness);
  return state;
}

WoaResult woa_optimize(const WoaConfig& config, const ObjectiveFunction& objective) {
  WoaState state = initialize_population(config, objective);
  while (state.iteration < config.max_iterations)
    state = woa_step(std::move(state), config, objective);
  return {std::move(state.best.position), state.best.fitness, std::move(state.history),
          state.evaluations};
}

void write_trace_csv(const std::filesystem::path& path, std::span<const double> history) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write trace file " + path.string());
  out << "iteration,best_fitness\n";
  char buf[64];
  for (std::size_t t = 0; t < history.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%.17g", history[t]);
    out << t << ',' << buf << '\n';
  }
}

}  // namespace windwoa::woa
