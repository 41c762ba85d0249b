#include "windwoa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "windwoa/error.hpp"

namespace windwoa::metrics {

namespace {

struct Moments {
  double mean_o = 0.0;
  double mean_p = 0.0;
  double ss_o = 0.0;   // sum (O - mean_o)^2
  double ss_p = 0.0;   // sum (P - mean_p)^2
  double sp_op = 0.0;  // sum (O - mean_o)(P - mean_p)
  double sse = 0.0;    // sum (P - O)^2
};

Moments moments(const PredictionPair& pair) {
  const auto& o = pair.observed();
  const auto& p = pair.predicted();
  const double n = static_cast<double>(o.size());
  Moments m;
  for (std::size_t i = 0; i < o.size(); ++i) {
    m.mean_o += o[i];
    m.mean_p += p[i];
  }
  m.mean_o /= n;
  m.mean_p /= n;
  for (std::size_t i = 0; i < o.size(); ++i) {
    const double dO = o[i] - m.mean_o;
    const double dP = p[i] - m.mean_p;
    m.ss_o += dO * dO;
    m.ss_p += dP * dP;
    m.sp_op += dO * dP;
    m.sse += (p[i] - o[i]) * (p[i] - o[i]);
  }
  return m;
}

double pearson(const Moments& m, const char* metric) {
  if (!(m.ss_o > 0.0)) throw UndefinedMetric(std::string(metric) + ": observed series is constant");
  if (!(m.ss_p > 0.0)) throw UndefinedMetric(std::string(metric) + ": predicted series is constant");
  double r = m.sp_op / std::sqrt(m.ss_o * m.ss_p);
  return std::clamp(r, -1.0, 1.0);
}

template <typename F>
std::optional<double> guarded(F&& f) {
  try {
    return f();
  } catch (const UndefinedMetric&) {
    return std::nullopt;
  }
}

}  // namespace

PredictionPair::PredictionPair(std::vector<double> observed, std::vector<double> predicted)
    : observed_(std::move(observed)), predicted_(std::move(predicted)) {
  if (observed_.empty() || observed_.size() != predicted_.size())
    throw ContractViolation("prediction pair: series must be non-empty and of equal length");
  for (std::size_t i = 0; i < observed_.size(); ++i)
    if (!std::isfinite(observed_[i]) || !std::isfinite(predicted_[i]))
      throw ContractViolation("prediction pair: non-finite value at index " + std::to_string(i));
}

double r_squared(const PredictionPair& pair) {
  const double r = pearson(moments(pair), "R2");
  return r * r;
}

double rmse(const PredictionPair& pair) {
  return std::sqrt(moments(pair).sse / static_cast<double>(pair.size()));
}

double willmott_index(const PredictionPair& pair) {
  const Moments m = moments(pair);
  const auto& o = pair.observed();
  const auto& p = pair.predicted();
  double denom = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    const double s = std::abs(p[i] - m.mean_o) + std::abs(o[i] - m.mean_o);
    denom += s * s;
  }
  if (!(denom > 0.0)) throw UndefinedMetric("WI: both series equal the observed mean everywhere");
  return 1.0 - m.sse / denom;
}

double scatter_index(const PredictionPair& pair) {
  const Moments m = moments(pair);
  if (m.mean_o == 0.0) throw UndefinedMetric("SI: observed mean is zero");
  return std::sqrt(m.sse / static_cast<double>(pair.size())) / m.mean_o;
}

double nse(const PredictionPair& pair) {
  const Moments m = moments(pair);
  if (!(m.ss_o > 0.0)) throw UndefinedMetric("NSE: observed series is constant");
  return 1.0 - m.sse / m.ss_o;
}

KgeComponents kge(const PredictionPair& pair) {
  const Moments m = moments(pair);
  if (m.mean_o == 0.0) throw UndefinedMetric("KGE: beta undefined, observed mean is zero");
  if (m.mean_p == 0.0) throw UndefinedMetric("KGE: gamma undefined, predicted mean is zero");
  const double r = pearson(m, "KGE: r");
  const double n = static_cast<double>(pair.size());
  const double cv_o = std::sqrt(m.ss_o / n) / m.mean_o;
  const double cv_p = std::sqrt(m.ss_p / n) / m.mean_p;
  const double beta = m.mean_p / m.mean_o;
  const double gamma = cv_p / cv_o;
  const double dist =
      std::sqrt((r - 1.0) * (r - 1.0) + (beta - 1.0) * (beta - 1.0) + (gamma - 1.0) * (gamma - 1.0));
  return {1.0 - dist, r, beta, gamma};
}

RelativeError relative_error(const PredictionPair& pair) {
  const auto& o = pair.observed();
  const auto& p = pair.predicted();
  RelativeError re;
  re.per_sample.reserve(o.size());
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (o[i] == 0.0) {
      re.per_sample.emplace_back();
      ++re.excluded;
      continue;
    }
    const double v = 100.0 * (p[i] - o[i]) / o[i];
    re.per_sample.emplace_back(v);
    sum += std::abs(v);
    ++defined;
  }
  if (defined > 0) re.mean_abs = sum / static_cast<double>(defined);
  return re;
}

MetricReport metric_report(const PredictionPair& pair) {
  MetricReport rep;
  rep.rmse = rmse(pair);
  rep.si = guarded([&] { return scatter_index(pair); });
  rep.wi = guarded([&] { return willmott_index(pair); });
  rep.nse = guarded([&] { return nse(pair); });
  rep.r_squared = guarded([&] { return r_squared(pair); });
  try {
    const KgeComponents k = kge(pair);
    rep.kge = k.kge;
    rep.kge_r = k.r;
    rep.kge_beta = k.beta;
    rep.kge_gamma = k.gamma;
  } catch (const UndefinedMetric&) {
  }
  const RelativeError re = relative_error(pair);
  rep.mean_abs_re = re.mean_abs;
  rep.re_excluded = re.excluded;
  return rep;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> kColumns{"RMSE", "SI", "WI", "NSE", "KGE", "R2", "RE"};
  return kColumns;
}

std::string format_value(const std::optional<double>& value) {
  if (!value) return kUndefined;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *value);
  return buf;
}

std::vector<std::string> report_cells(const MetricReport& r) {
  return {format_value(r.rmse), format_value(r.si),        format_value(r.wi),
          format_value(r.nse),  format_value(r.kge),       format_value(r.r_squared),
          format_value(r.mean_abs_re)};
}

nlohmann::ordered_json to_json(const MetricReport& r) {
  auto cell = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (v) return *v;
    return kUndefined;
  };
  return {{"RMSE", cell(r.rmse)},
          {"SI", cell(r.si)},
          {"WI", cell(r.wi)},
          {"NSE", cell(r.nse)},
          {"KGE", cell(r.kge)},
          {"R2", cell(r.r_squared)},
          {"RE", cell(r.mean_abs_re)},
          {"kge_r", cell(r.kge_r)},
          {"kge_beta", cell(r.kge_beta)},
          {"kge_gamma", cell(r.kge_gamma)},
          {"re_excluded", r.re_excluded}};
}

MetricReport report_from_json(const nlohmann::json& doc) {
  auto cell = [&](const char* key) -> std::optional<double> {
    const auto& v = doc.at(key);
    if (v.is_number()) return v.get<double>();
    return std::nullopt;
  };
  MetricReport r;
  r.rmse = cell("RMSE");
  r.si = cell("SI");
  r.wi = cell("WI");
  r.nse = cell("NSE");
  r.kge = cell("KGE");
  r.r_squared = cell("R2");
  r.mean_abs_re = cell("RE");
  r.kge_r = cell("kge_r");
  r.kge_beta = cell("kge_beta");
  r.kge_gamma = cell("kge_gamma");
  r.re_excluded = doc.value("re_excluded", std::size_t{0});
  return r;
}

}  // namespace windwoa::metrics
