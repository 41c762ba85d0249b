#pragma once

// Agreement statistics between observed (O) and predicted (P) series.
// Standard deviations and coefficients of variation use the population
// (divide-by-n) convention.

#include "json.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace windwoa::metrics {

class PredictionPair {
 public:
  /// Throws ContractViolation unless both are non-empty, equal length, finite.
  PredictionPair(std::vector<double> observed, std::vector<double> predicted);

  const std::vector<double>& observed() const { return observed_; }
  const std::vector<double>& predicted() const { return predicted_; }
  std::size_t size() const { return observed_.size(); }

 private:
  std::vector<double> observed_;
  std::vector<double> predicted_;
};

struct KgeComponents {
  double kge;
  double r;
  double beta;
  double gamma;
};

struct RelativeError {
  /// 100 (P - O) / O; empty where O == 0.
  std::vector<std::optional<double>> per_sample;
  /// Mean |RE| over defined samples; empty if none is defined.
  std::optional<double> mean_abs;
  std::size_t excluded = 0;
};

// Each metric throws UndefinedMetric when its precondition fails.
double r_squared(const PredictionPair& pair);
double rmse(const PredictionPair& pair);
double willmott_index(const PredictionPair& pair);
double scatter_index(const PredictionPair& pair);
double nse(const PredictionPair& pair);
KgeComponents kge(const PredictionPair& pair);
RelativeError relative_error(const PredictionPair& pair);

/// One model/phase row. Empty optionals are undefined metrics.
struct MetricReport {
  std::optional<double> rmse;
  std::optional<double> si;
  std::optional<double> wi;
  std::optional<double> nse;
  std::optional<double> kge;
  std::optional<double> r_squared;
  std::optional<double> mean_abs_re;
  std::optional<double> kge_r;
  std::optional<double> kge_beta;
  std::optional<double> kge_gamma;
  std::size_t re_excluded = 0;
};

MetricReport metric_report(const PredictionPair& pair);

/// Column names in serialized order: RMSE, SI, WI, NSE, KGE, R2, RE.
const std::vector<std::string>& report_columns();
/// Serialized values in report_columns() order; undefined cells read "undefined".
std::vector<std::string> report_cells(const MetricReport& report);
std::string format_value(const std::optional<double>& value);
inline constexpr const char* kUndefined = "undefined";

nlohmann::ordered_json to_json(const MetricReport& report);
MetricReport report_from_json(const nlohmann::json& doc);

}  // namespace windwoa::metrics
