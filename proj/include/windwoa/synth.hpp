#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "windwoa/dataset.hpp"

namespace windwoa::data {

struct SynthOptions {
  /// Marginal standard deviation as a fraction of the station mean.
  double sd_to_mean = 0.5;
  /// Eigenvalue floor used when repairing a non positive-definite matrix.
  double eigen_floor = 1e-6;
  /// First timestamp; one row per day from here.
  std::string start_date = "2004-01-01";
};

/// Nearest positive-definite correlation by eigenvalue clipping followed by
/// rescaling to a unit diagonal. Throws DataError if `corr` is not square
/// and symmetric.
Eigen::MatrixXd repair_correlation(const Eigen::MatrixXd& corr, double eigen_floor = 1e-6);

/// Correlated Gaussian draws mapped to each station's mean, clipped to
/// [0, max_speed]. Deterministic per seed.
StationFrame synth_generate(const std::vector<StationMeta>& metas, const Eigen::MatrixXd& corr,
                            std::size_t n_rows, std::uint64_t seed,
                            const SynthOptions& options = {});

/// `name,latitude,longitude,altitude,mean_speed,max_speed` rows; '#' comments.
std::vector<StationMeta> load_station_meta(const std::filesystem::path& path);
/// Full square matrix with a header row of station names; rows and columns
/// are reordered to follow `order`.
Eigen::MatrixXd load_correlation(const std::filesystem::path& path,
                                 const std::vector<std::string>& order);

std::filesystem::path bundled_meta_path();
std::filesystem::path bundled_corr_path();

}  // namespace windwoa::data
