#pragma once

#include <Eigen/Core>

#include <optional>
#include <string_view>

#include "windwoa/woa.hpp"

namespace windwoa::woa {

double sphere(const Vector& x);
double rosenbrock(const Vector& x);
double rastrigin(const Vector& x);

struct TestFunction {
  std::string_view name;
  double (*fn)(const Vector&);
  double lower;
  double upper;
};

/// Looks up sphere / rosenbrock / rastrigin with their conventional domains.
std::optional<TestFunction> find_test_function(std::string_view name);

}  // namespace windwoa::woa
