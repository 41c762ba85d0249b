#pragma once

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace windwoa::data {

/// Per-column z-score transform. Columns of the matrices passed to apply()
/// and invert() correspond one-to-one with `names`.
struct Normalizer {
  std::vector<std::string> names;
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;

  std::size_t width() const { return names.size(); }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& values) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& values) const;
  Eigen::VectorXd apply_column(std::size_t column, const Eigen::VectorXd& values) const;
  Eigen::VectorXd invert_column(std::size_t column, const Eigen::VectorXd& values) const;
};

/// Fits mean and population standard deviation of `columns` of `values` over
/// `rows` only. Throws DataError naming the column if its spread is zero.
Normalizer fit_normalizer(const Eigen::MatrixXd& values, std::span<const std::size_t> rows,
                          std::span<const std::size_t> columns,
                          std::span<const std::string> column_names);

}  // namespace windwoa::data
