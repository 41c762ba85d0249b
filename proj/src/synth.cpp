#include "windwoa/synth.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "windwoa/error.hpp"
#include "windwoa/rng.hpp"

namespace windwoa::data {

namespace {

std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::string f;
    std::istringstream ss(line);
    while (std::getline(ss, f, ',')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw DataError(path.string() + ": file is empty");
  return rows;
}

double to_number(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(path.string() + ": non-numeric cell '" + s + "'");
  }
}

std::string iso_date(const std::chrono::sys_days& day) {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::chrono::sys_days parse_date(const std::string& s) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (std::sscanf(s.c_str(), "%d-%u-%u", &y, &m, &d) != 3)
    throw ContractViolation("synth: start date must be YYYY-MM-DD");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) throw ContractViolation("synth: invalid start date " + s);
  return std::chrono::sys_days{ymd};
}

}  // namespace

Eigen::MatrixXd repair_correlation(const Eigen::MatrixXd& corr, double eigen_floor) {
  if (corr.rows() != corr.cols() || corr.rows() < 1)
    throw DataError("correlation matrix must be square");
  if (!corr.allFinite()) throw DataError("correlation matrix has non-finite entries");
  if ((corr - corr.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw DataError("correlation matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
  if (eig.eigenvalues().minCoeff() >= eigen_floor) return corr;

  const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(eigen_floor);
  Eigen::MatrixXd fixed = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  const Eigen::VectorXd scale = fixed.diagonal().cwiseSqrt().cwiseInverse();
  fixed = scale.asDiagonal() * fixed * scale.asDiagonal();
  fixed = 0.5 * (fixed + fixed.transpose());
  fixed.diagonal().setOnes();
  return fixed;
}

StationFrame synth_generate(const std::vector<StationMeta>& metas, const Eigen::MatrixXd& corr,
                            std::size_t n_rows, std::uint64_t seed, const SynthOptions& options) {
  const auto k = static_cast<Eigen::Index>(metas.size());
  if (k < 2) throw ContractViolation("synth: need at least 2 stations");
  if (n_rows < 1) throw ContractViolation("synth: need at least 1 row");
  if (corr.rows() != k || corr.cols() != k)
    throw DataError("synth: correlation matrix size does not match station count");
  for (const auto& m : metas)
    if (!(m.max_speed >= m.mean_speed && m.mean_speed >= 0.0))
      throw DataError("synth: station '" + m.name + "' violates max >= mean >= 0");

  const Eigen::MatrixXd repaired = repair_correlation(corr, options.eigen_floor);
  Eigen::LLT<Eigen::MatrixXd> llt(repaired);
  if (llt.info() != Eigen::Success) throw DataError("synth: correlation factorization failed");
  const Eigen::MatrixXd factor = llt.matrixL();

  StationFrame frame;
  frame.stations = metas;
  frame.records.resize(static_cast<Eigen::Index>(n_rows), k);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd z(k);
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(n_rows); ++r) {
    for (Eigen::Index c = 0; c < k; ++c) z[c] = gauss(rng);
    const Eigen::VectorXd x = factor * z;
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto& m = metas[static_cast<std::size_t>(c)];
      const double v = m.mean_speed + options.sd_to_mean * m.mean_speed * x[c];
      frame.records(r, c) = std::clamp(v, 0.0, m.max_speed);
    }
  }

  std::chrono::sys_days day = parse_date(options.start_date);
  frame.timestamps.reserve(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r, day += std::chrono::days{1})
    frame.timestamps.push_back(iso_date(day));
  return frame;
}

std::vector<StationMeta> load_station_meta(const std::filesystem::path& path) {
  const auto rows = read_table(path);
  const std::vector<std::string> expected{"name",     "latitude",   "longitude",
                                          "altitude", "mean_speed", "max_speed"};
  if (rows.front() != expected) throw DataError(path.string() + ": unexpected header");
  std::vector<StationMeta> metas;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != expected.size()) throw DataError(path.string() + ": wrong cell count");
    StationMeta m;
    m.name = f[0];
    m.latitude = to_number(f[1], path);
    m.longitude = to_number(f[2], path);
    m.altitude = to_number(f[3], path);
    m.mean_speed = to_number(f[4], path);
    m.max_speed = to_number(f[5], path);
    if (!(m.max_speed >= m.mean_speed && m.mean_speed >= 0.0))
      throw DataError(path.string() + ": station '" + m.name + "' violates max >= mean >= 0");
    metas.push_back(std::move(m));
  }
  return metas;
}

Eigen::MatrixXd load_correlation(const std::filesystem::path& path,
                                 const std::vector<std::string>& order) {
  const auto rows = read_table(path);
  const auto& header = rows.front();
  const std::size_t k = header.size() - 1;
  if (k < 1 || rows.size() != k + 1) throw DataError(path.string() + ": matrix must be square");
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < k; ++c) column[header[c + 1]] = c;
  Eigen::MatrixXd full(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t r = 0; r < k; ++r) {
    const auto& f = rows[r + 1];
    if (f.size() != k + 1 || f[0] != header[r + 1])
      throw DataError(path.string() + ": row " + std::to_string(r + 1) + " does not match header");
    for (std::size_t c = 0; c < k; ++c)
      full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = to_number(f[c + 1], path);
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(order.size()), static_cast<Eigen::Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto a = column.find(order[i]);
    if (a == column.end()) throw DataError(path.string() + ": missing station '" + order[i] + "'");
    for (std::size_t j = 0; j < order.size(); ++j) {
      const auto b = column.find(order[j]);
      if (b == column.end()) throw DataError(path.string() + ": missing station '" + order[j] + "'");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          full(static_cast<Eigen::Index>(a->second), static_cast<Eigen::Index>(b->second));
    }
  }
  return out;
}

std::filesystem::path bundled_meta_path() {
  return std::filesystem::path(WINDWOA_DATA_DIR) / "gilan_meta.csv";
}
std::filesystem::path bundled_corr_path() {
  return std::filesystem::path(WINDWOA_DATA_DIR) / "gilan_corr.csv";
}

}  // namespace windwoa::data
