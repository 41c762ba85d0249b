#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace windwoa::data {

struct StationMeta {
  std::string name;
  double latitude = 0.0;   // decimal degrees
  double longitude = 0.0;  // decimal degrees
  double altitude = 0.0;   // m
  double mean_speed = 0.0; // m/s
  double max_speed = 0.0;  // m/s
};

/// Aligned wind-speed table: one column per station, one row per time step.
struct StationFrame {
  std::vector<StationMeta> stations;
  Eigen::MatrixXd records;
  std::vector<std::string> timestamps;
  /// Rows dropped at ingestion because a cell was missing.
  std::size_t dropped_rows = 0;

  std::size_t station_count() const { return stations.size(); }
  std::size_t row_count() const { return static_cast<std::size_t>(records.rows()); }
  std::vector<std::string> station_names() const;
  void validate() const;
};

/// Reads `timestamp,<station1>,...` CSV. Rows with an empty cell are dropped
/// and counted; anything else malformed throws DataError.
StationFrame load_csv(const std::filesystem::path& path);
StationFrame parse_csv(std::istream& in, const std::string& source = "<stream>");
void write_csv(const StationFrame& frame, std::ostream& out);
void write_csv(const StationFrame& frame, const std::filesystem::path& path);

struct LooTask {
  std::size_t index = 0;  // 0-based; model ids use index + 1
  std::string target;
  std::size_t target_column = 0;
  std::vector<std::string> references;
  std::vector<std::size_t> reference_columns;
  std::string baseline_id;  // MLP{k}
  std::string hybrid_id;    // MLP-WOA{k}
};

/// One task per station, references in frame order.
std::vector<LooTask> build_loo_tasks(const StationFrame& frame);

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

/// Seeded uniform shuffle; the first round(fraction * n) indices train.
/// Both index lists come back sorted.
SplitSpec random_split(std::size_t n_rows, double train_fraction, std::uint64_t seed);

/// Pairwise Pearson correlation between station columns.
Eigen::MatrixXd correlation_matrix(const StationFrame& frame);

}  // namespace windwoa::data
