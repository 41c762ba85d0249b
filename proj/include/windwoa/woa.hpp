#pragma once

// Whale Optimization Algorithm over a box-bounded continuous search space.
// Minimization throughout; the optimizer knows nothing about what it is
// optimizing.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "windwoa/parallel.hpp"
#include "windwoa/rng.hpp"

namespace windwoa::woa {

using Vector = Eigen::VectorXd;

class Bounds {
 public:
  Bounds() = default;
  /// Throws ContractViolation unless lengths match, are >= 1 and lower < upper.
  Bounds(Vector lower, Vector upper);
  static Bounds uniform(std::size_t dim, double lower, double upper);

  std::size_t dim() const { return static_cast<std::size_t>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  Vector clamp(const Vector& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }
  bool contains(const Vector& x) const;

 private:
  Vector lower_;
  Vector upper_;
};

struct WoaConfig {
  std::size_t population_size = 30;
  std::size_t max_iterations = 50;
  std::uint64_t seed = 0;
  double spiral_constant_b = 1.0;
  Bounds bounds;
  // Literal reading of "L = 0.65, P = 0.37": when set, the spiral parameter
  // and/or the branch selector are held fixed instead of drawn per step.
  std::optional<double> frozen_l;
  std::optional<double> frozen_p;
  ExecPolicy policy = ExecPolicy::serial;

  void validate() const;
};

struct SearchAgent {
  Vector position;
  double fitness = 0.0;
};

struct WoaState {
  std::vector<SearchAgent> population;
  SearchAgent best;
  std::size_t iteration = 0;
  double a = 2.0;
  /// history[0] is the best fitness after initialization, history[t] after step t.
  std::vector<double> history;
  std::size_t evaluations = 0;
};

/// Must be pure in its argument and safe to call concurrently when the
/// parallel policy is selected. Non-finite return values mark the point
/// infeasible.
using ObjectiveFunction = std::function<double(const Vector&)>;

struct Coefficients {
  Vector A;
  Vector C;
  Vector r;
};

struct WoaResult {
  Vector best_position;
  double best_fitness = 0.0;
  std::vector<double> history;
  std::size_t evaluations = 0;
};

/// a = 2 - t * 2 / max_iterations.
double decay_a(std::size_t t, std::size_t max_iterations);

/// A = 2 a r - a, C = 2 r for a given r.
Coefficients coefficients_from_r(double a, Vector r);
/// Draws r ~ U[0,1]^dim and forms A and C.
Coefficients coefficient_vectors(double a, std::size_t dim, Rng& rng);

/// Shrinking encircling: X* - A o |C o X* - X|.
Vector encircle_step(const Vector& agent, const Vector& best, const Vector& A, const Vector& C);
/// Bubble-net spiral: |X* - X| e^{b l} cos(2 pi l) + X*.
Vector spiral_step(const Vector& agent, const Vector& best, double b, double l);
/// Exploration toward a randomly chosen agent: X_rand - A o |C o X_rand - X|.
Vector explore_step(const Vector& agent, const Vector& random_agent, const Vector& A,
                    const Vector& C);

enum class Move { encircle, explore, spiral };

/// p < 0.5 picks a shrinking move, toward the best agent when |A[0]| < 1 and
/// toward a random agent otherwise; p >= 0.5 picks the spiral.
Move choose_move(double p, const Vector& A);

/// Evaluates `objective` at every position, writing into `fitness`.
/// Non-finite results are stored as +inf.
void evaluate_positions(const ObjectiveFunction& objective, std::span<const Vector> positions,
                        std::span<double> fitness, ExecPolicy policy);

WoaState initialize_population(const WoaConfig& config, const ObjectiveFunction& objective);
WoaState woa_step(WoaState state, const WoaConfig& config, const ObjectiveFunction& objective);
WoaResult woa_optimize(const WoaConfig& config, const ObjectiveFunction& objective);

/// Writes `iteration,best_fitness` rows, one per history entry.
void write_trace_csv(const std::filesystem::path& path, std::span<const double> history);

}  // namespace windwoa::woa
