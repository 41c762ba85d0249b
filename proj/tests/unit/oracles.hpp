#pragma once

// Independent reference computations used only by tests. These follow the
// textbook formulas term by term (raw sums, separate loops) and share no code
// with the library.

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Population standard deviation, two-pass.
inline double sd(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

// Pearson r, raw-sum form: (Σop - Σo Σp / n) / sqrt((Σo² - (Σo)²/n)(Σp² - (Σp)²/n)).
inline double pearson(const std::vector<double>& o, const std::vector<double>& p) {
  const double n = static_cast<double>(o.size());
  double so = 0, sp = 0, sop = 0, soo = 0, spp = 0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    so += o[i];
    sp += p[i];
    sop += o[i] * p[i];
    soo += o[i] * o[i];
    spp += p[i] * p[i];
  }
  return (sop - so * sp / n) / std::sqrt((soo - so * so / n) * (spp - sp * sp / n));
}

inline double r_squared(const std::vector<double>& o, const std::vector<double>& p) {
  const double r = pearson(o, p);
  return r * r;
}

inline double rmse(const std::vector<double>& o, const std::vector<double>& p) {
  double s = 0;
  for (std::size_t i = 0; i < o.size(); ++i) s += std::pow(p[i] - o[i], 2);
  return std::sqrt(s / static_cast<double>(o.size()));
}

inline double willmott(const std::vector<double>& o, const std::vector<double>& p) {
  const double ob = mean(o);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < o.size(); ++i) num += std::pow(o[i] - p[i], 2);
  for (std::size_t i = 0; i < o.size(); ++i) den += std::pow(std::fabs(p[i] - ob) + std::fabs(o[i] - ob), 2);
  return 1.0 - num / den;
}

inline double scatter(const std::vector<double>& o, const std::vector<double>& p) {
  return rmse(o, p) / mean(o);
}

inline double nse(const std::vector<double>& o, const std::vector<double>& p) {
  const double ob = mean(o);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    num += std::pow(p[i] - o[i], 2);
    den += std::pow(o[i] - ob, 2);
  }
  return 1.0 - num / den;
}

inline double kge(const std::vector<double>& o, const std::vector<double>& p) {
  const double r = pearson(o, p);
  const double beta = mean(p) / mean(o);
  const double gamma = (sd(p) / mean(p)) / (sd(o) / mean(o));
  return 1.0 - std::sqrt(std::pow(r - 1, 2) + std::pow(beta - 1, 2) + std::pow(gamma - 1, 2));
}

inline double mean_abs_re(const std::vector<double>& o, const std::vector<double>& p) {
  double s = 0;
  for (std::size_t i = 0; i < o.size(); ++i) s += std::fabs(100.0 * (p[i] - o[i]) / o[i]);
  return s / static_cast<double>(o.size());
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0 ? 0.0 : std::fabs(a - b) / scale;
}

struct Pair {
  std::vector<double> o, p;
};

// Wind-speed-like observations with noisy, biased predictions.
inline Pair random_pair(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> obs(0.2, 12.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> gain(0.5, 1.5), bias(-0.5, 0.5), spread(0.1, 3.0);
  const double g = gain(rng), b = bias(rng), s = spread(rng);
  Pair pr;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = obs(rng);
    pr.o.push_back(x);
    pr.p.push_back(g * x + b + s * noise(rng));
  }
  return pr;
}

}  // namespace oracle
