#include "windwoa/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "windwoa/error.hpp"
#include "windwoa/rng.hpp"

namespace windwoa::data {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::vector<std::string> StationFrame::station_names() const {
  std::vector<std::string> names;
  for (const auto& s : stations) names.push_back(s.name);
  return names;
}

void StationFrame::validate() const {
  if (stations.size() < 2) throw DataError("frame needs at least 2 stations");
  if (records.rows() < 1) throw DataError("frame has no complete rows");
  if (static_cast<std::size_t>(records.cols()) != stations.size())
    throw DataError("frame column count differs from station count");
  if (timestamps.size() != static_cast<std::size_t>(records.rows()))
    throw DataError("frame timestamp count differs from row count");
  if (!records.allFinite() || (records.array() < 0.0).any())
    throw DataError("frame speeds must be finite and non-negative");
}

StationFrame parse_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    header = split_fields(t);
    break;
  }
  if (header.empty()) throw DataError(source + ": file is empty");
  if (header.size() < 3) throw DataError(source + ": need a timestamp column and at least 2 stations");

  StationFrame frame;
  std::set<std::string> seen;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) throw DataError(source + ": empty station name in header");
    if (!seen.insert(header[c]).second)
      throw DataError(source + ": duplicate station name '" + header[c] + "'");
    frame.stations.push_back({header[c]});
  }
  const std::size_t k = frame.stations.size();

  std::vector<double> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> fields = split_fields(t);
    if (fields.size() > k + 1)
      throw DataError(source + ":" + std::to_string(line_no) + ": too many cells");
    bool gap = fields.size() < k + 1;
    std::vector<double> row(k);
    for (std::size_t c = 0; c < k && !gap; ++c) {
      const std::string& f = fields[c + 1];
      if (f.empty()) {
        gap = true;
        break;
      }
      if (!parse_double(f, row[c]) || !std::isfinite(row[c]))
        throw DataError(source + ":" + std::to_string(line_no) + ": non-numeric cell '" + f + "'");
      if (row[c] < 0.0)
        throw DataError(source + ":" + std::to_string(line_no) + ": negative wind speed");
    }
    if (gap) {
      ++frame.dropped_rows;
      continue;
    }
    frame.timestamps.push_back(fields[0]);
    cells.insert(cells.end(), row.begin(), row.end());
  }

  const auto rows = static_cast<Eigen::Index>(frame.timestamps.size());
  frame.records.resize(rows, static_cast<Eigen::Index>(k));
  for (Eigen::Index r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < k; ++c)
      frame.records(r, static_cast<Eigen::Index>(c)) = cells[static_cast<std::size_t>(r) * k + c];
  if (rows == 0) throw DataError(source + ": no complete data rows");

  for (std::size_t c = 0; c < k; ++c) {
    const auto col = frame.records.col(static_cast<Eigen::Index>(c));
    frame.stations[c].mean_speed = col.mean();
    frame.stations[c].max_speed = col.maxCoeff();
  }
  frame.validate();
  return frame;
}

StationFrame load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file " + path.string());
  return parse_csv(in, path.string());
}

void write_csv(const StationFrame& frame, std::ostream& out) {
  out << "timestamp";
  for (const auto& s : frame.stations) out << ',' << s.name;
  out << '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < frame.records.rows(); ++r) {
    out << frame.timestamps[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < frame.records.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.4f", frame.records(r, c));
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_csv(const StationFrame& frame, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_csv(frame, out);
}

std::vector<LooTask> build_loo_tasks(const StationFrame& frame) {
  if (frame.station_count() < 2) throw DataError("leave-one-out tasks need at least 2 stations");
  std::vector<LooTask> tasks;
  for (std::size_t t = 0; t < frame.station_count(); ++t) {
    LooTask task;
    task.index = t;
    task.target = frame.stations[t].name;
    task.target_column = t;
    for (std::size_t c = 0; c < frame.station_count(); ++c) {
      if (c == t) continue;
      task.references.push_back(frame.stations[c].name);
      task.reference_columns.push_back(c);
    }
    task.baseline_id = "MLP" + std::to_string(t + 1);
    task.hybrid_id = "MLP-WOA" + std::to_string(t + 1);
    tasks.push_back(std::move(task));
  }
  return tasks;
}

SplitSpec random_split(std::size_t n_rows, double train_fraction, std::uint64_t seed) {
  if (n_rows < 2) throw ContractViolation("random_split: need at least 2 rows");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ContractViolation("random_split: train fraction must lie in (0, 1)");
  std::vector<std::size_t> order(n_rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n_rows)));
  SplitSpec spec;
  spec.train_fraction = train_fraction;
  spec.seed = seed;
  spec.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  spec.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(spec.train_indices.begin(), spec.train_indices.end());
  std::sort(spec.test_indices.begin(), spec.test_indices.end());
  return spec;
}

Eigen::MatrixXd correlation_matrix(const StationFrame& frame) {
  const Eigen::Index k = frame.records.cols();
  const Eigen::MatrixXd centered = frame.records.rowwise() - frame.records.colwise().mean();
  Eigen::VectorXd norms = centered.colwise().norm();
  for (Eigen::Index c = 0; c < k; ++c)
    if (!(norms[c] > 0.0))
      throw DataError("correlation: station '" + frame.stations[static_cast<std::size_t>(c)].name +
                      "' is constant");
  Eigen::MatrixXd corr(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    corr(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double r = centered.col(i).dot(centered.col(j)) / (norms[i] * norms[j]);
      corr(i, j) = corr(j, i) = std::clamp(r, -1.0, 1.0);
    }
  }
  return corr;
}

}  // namespace windwoa::data
