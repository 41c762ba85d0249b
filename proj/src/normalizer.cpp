#include "windwoa/normalizer.hpp"

#include <cmath>

#include "windwoa/error.hpp"

namespace windwoa::data {

Normalizer fit_normalizer(const Eigen::MatrixXd& values, std::span<const std::size_t> rows,
                          std::span<const std::size_t> columns,
                          std::span<const std::string> column_names) {
  if (rows.empty()) throw ContractViolation("fit_normalizer: no training rows");
  if (column_names.size() != columns.size())
    throw ContractViolation("fit_normalizer: one name per column required");
  Normalizer norm;
  norm.names.assign(column_names.begin(), column_names.end());
  const auto width = static_cast<Eigen::Index>(columns.size());
  norm.mean.resize(width);
  norm.sd.resize(width);
  const double n = static_cast<double>(rows.size());
  for (Eigen::Index c = 0; c < width; ++c) {
    const auto col = static_cast<Eigen::Index>(columns[static_cast<std::size_t>(c)]);
    if (col >= values.cols()) throw ContractViolation("fit_normalizer: column out of range");
    double sum = 0.0;
    for (std::size_t r : rows) sum += values(static_cast<Eigen::Index>(r), col);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t r : rows) {
      const double d = values(static_cast<Eigen::Index>(r), col) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / n);
    if (!(sd > 0.0))
      throw DataError("column '" + norm.names[static_cast<std::size_t>(c)] +
                      "' has zero variance over the training rows");
    norm.mean[c] = mean;
    norm.sd[c] = sd;
  }
  return norm;
}

Eigen::MatrixXd Normalizer::apply(const Eigen::MatrixXd& values) const {
  if (static_cast<std::size_t>(values.cols()) != width())
    throw ContractViolation("normalizer: column count mismatch");
  Eigen::MatrixXd out(values.rows(), values.cols());
  for (Eigen::Index c = 0; c < values.cols(); ++c)
    out.col(c) = (values.col(c).array() - mean[c]) / sd[c];
  return out;
}

Eigen::MatrixXd Normalizer::invert(const Eigen::MatrixXd& values) const {
  if (static_cast<std::size_t>(values.cols()) != width())
    throw ContractViolation("normalizer: column count mismatch");
  Eigen::MatrixXd out(values.rows(), values.cols());
  for (Eigen::Index c = 0; c < values.cols(); ++c)
    out.col(c) = values.col(c).array() * sd[c] + mean[c];
  return out;
}

Eigen::VectorXd Normalizer::apply_column(std::size_t column, const Eigen::VectorXd& values) const {
  if (column >= width()) throw ContractViolation("normalizer: column out of range");
  const auto c = static_cast<Eigen::Index>(column);
  return (values.array() - mean[c]) / sd[c];
}

Eigen::VectorXd Normalizer::invert_column(std::size_t column, const Eigen::VectorXd& values) const {
  if (column >= width()) throw ContractViolation("normalizer: column out of range");
  const auto c = static_cast<Eigen::Index>(column);
  return values.array() * sd[c] + mean[c];
}

}  // namespace windwoa::data
