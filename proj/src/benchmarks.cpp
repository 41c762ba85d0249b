#include "windwoa/benchmarks.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace windwoa::woa {

double sphere(const Vector& x) { return x.squaredNorm(); }

double rosenbrock(const Vector& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    sum += 100.0 * a * a + b * b;
  }
  return sum;
}

double rastrigin(const Vector& x) {
  double sum = 10.0 * static_cast<double>(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    sum += x[i] * x[i] - 10.0 * std::cos(2.0 * std::numbers::pi * x[i]);
  return sum;
}

std::optional<TestFunction> find_test_function(std::string_view name) {
  static constexpr std::array<TestFunction, 3> kFunctions{{
      {"sphere", &sphere, -10.0, 10.0},
      {"rosenbrock", &rosenbrock, -5.0, 10.0},
      {"rastrigin", &rastrigin, -5.12, 5.12},
  }};
  for (const auto& f : kFunctions)
    if (f.name == name) return f;
  return std::nullopt;
}

}  // namespace windwoa::woa
