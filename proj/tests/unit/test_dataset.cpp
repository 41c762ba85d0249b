#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "windwoa/dataset.hpp"
#include "windwoa/error.hpp"
#include "windwoa/normalizer.hpp"
#include "windwoa/rng.hpp"

using namespace windwoa;
using namespace windwoa::data;

namespace {

StationFrame parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

StationFrame fixture() { return load_csv(std::filesystem::path(WINDWOA_FIXTURE_DIR) / "stations_132.csv"); }

StationFrame random_frame(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  StationFrame f;
  for (std::size_t c = 0; c < cols; ++c) f.stations.push_back({.name = "S" + std::to_string(c)});
  f.records.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < f.records.size(); ++i) f.records.data()[i] = uniform(rng, 0, 10);
  f.timestamps.assign(rows, "t");
  return f;
}

}  // namespace

TEST_CASE("fixture file loads as 132 x 10") {
  const auto f = fixture();
  CHECK(f.row_count() == 132);
  CHECK(f.station_count() == 10);
  CHECK(f.dropped_rows == 0);
  CHECK(f.station_names().front() == "Astara");
  CHECK(f.timestamps.front() == "2004-01-01");
  CHECK(f.records(0, 2) == 8.1);
}

TEST_CASE("gap rows are dropped and counted") {
  const auto f = parse("timestamp,A,B,C\n1,1.0,2.0,3.0\n2,1.5,,3.5\n3,0,0,0\n4, 2 ,1,\n");
  CHECK(f.row_count() == 2);
  CHECK(f.dropped_rows == 2);
  CHECK(f.timestamps == std::vector<std::string>{"1", "3"});
  const auto g = parse("# comment\ntimestamp,A,B\n1,1,2\n2,,\n");
  CHECK(g.dropped_rows == 1);
}

TEST_CASE("malformed files") {
  CHECK_THROWS_AS(parse(""), DataError);
  CHECK_THROWS_AS(parse("timestamp,Rasht,Rasht\n1,1,2\n"), DataError);
  CHECK_THROWS_AS(parse("timestamp,A\n1,1\n"), DataError);
  CHECK_THROWS_AS(parse("timestamp,A,B\n1,1,abc\n"), DataError);
  CHECK_THROWS_AS(parse("timestamp,A,B\n1,1,-2\n"), DataError);
  CHECK_THROWS_AS(parse("timestamp,A,B\n1,1,2,3\n"), DataError);
  CHECK_THROWS_AS(parse("timestamp,A,B\n"), DataError);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), DataError);
}

TEST_CASE("csv round trip") {
  const auto f = fixture();
  std::stringstream buf;
  write_csv(f, buf);
  const auto g = parse_csv(buf);
  CHECK(g.records == f.records);
  CHECK(g.station_names() == f.station_names());
  CHECK(g.timestamps == f.timestamps);
}

TEST_CASE("leave-one-out tasks") {
  const auto f = fixture();
  const auto tasks = build_loo_tasks(f);
  REQUIRE(tasks.size() == 10);
  CHECK(tasks[0].target == "Astara");
  CHECK(tasks[0].baseline_id == "MLP1");
  CHECK(tasks[0].hybrid_id == "MLP-WOA1");
  CHECK(tasks[9].hybrid_id == "MLP-WOA10");
  const auto names = f.station_names();
  CHECK(tasks[0].references == std::vector<std::string>(names.begin() + 1, names.end()));
  std::set<std::string> targets;
  for (const auto& t : tasks) {
    targets.insert(t.target);
    CHECK(t.references.size() == 9);
    CHECK(std::find(t.references.begin(), t.references.end(), t.target) == t.references.end());
    CHECK(t.reference_columns.size() == 9);
    CHECK(names[t.target_column] == t.target);
  }
  CHECK(targets.size() == 10);

  const auto two = build_loo_tasks(parse("timestamp,A,B\n1,1,2\n2,3,4\n"));
  REQUIRE(two.size() == 2);
  CHECK(two[0].references == std::vector<std::string>{"B"});
  CHECK(two[1].references == std::vector<std::string>{"A"});
}

TEST_CASE("split sizes") {
  const auto s = random_split(3611, 0.7, 1);
  CHECK(s.train_indices.size() == 2528);
  CHECK(s.test_indices.size() == 1083);
  const auto small = random_split(10, 0.7, 1);
  CHECK(small.train_indices.size() == 7);
  CHECK(small.test_indices.size() == 3);
  CHECK(random_split(3611, 0.7, 1).train_indices == s.train_indices);
  CHECK(random_split(3611, 0.7, 2).train_indices != s.train_indices);
  CHECK_THROWS_AS(random_split(10, 1.0, 1), ContractViolation);
  CHECK_THROWS_AS(random_split(1, 0.5, 1), ContractViolation);
}

TEST_CASE("property: splits partition the rows") {
  Rng rng(6);
  for (std::size_t n = 2; n <= 1000; n += 1 + n / 20) {
    const double frac = uniform(rng, 0.3, 0.9);
    const auto s = random_split(n, frac, rng());
    CHECK(s.train_indices.size() == static_cast<std::size_t>(std::llround(frac * static_cast<double>(n))));
    CHECK(std::is_sorted(s.train_indices.begin(), s.train_indices.end()));
    CHECK(std::is_sorted(s.test_indices.begin(), s.test_indices.end()));
    std::vector<std::size_t> all = s.train_indices;
    all.insert(all.end(), s.test_indices.begin(), s.test_indices.end());
    std::sort(all.begin(), all.end());
    bool identity = all.size() == n;
    for (std::size_t i = 0; identity && i < n; ++i) identity = all[i] == i;
    CHECK(identity);
  }
}

TEST_CASE("normalizer") {
  const auto f = random_frame(200, 4, 3);
  const auto split = random_split(200, 0.7, 9);
  const std::vector<std::size_t> cols{0, 1, 2, 3};
  const auto names = f.station_names();
  const auto norm = fit_normalizer(f.records, split.train_indices, cols, names);
  const Eigen::MatrixXd z = norm.apply(f.records);
  CHECK((norm.invert(z) - f.records).cwiseAbs().maxCoeff() < 1e-12);

  for (Eigen::Index c = 0; c < 4; ++c) {
    std::vector<double> train;
    for (auto r : split.train_indices) train.push_back(z(static_cast<Eigen::Index>(r), c));
    CHECK(std::fabs(oracle::mean(train)) < 1e-10);
    CHECK(std::fabs(oracle::sd(train) - 1.0) < 1e-10);
  }

  // Test rows do not influence the fitted constants.
  auto g = f;
  for (auto r : split.test_indices) g.records.row(static_cast<Eigen::Index>(r)).setConstant(1e6);
  const auto same = fit_normalizer(g.records, split.train_indices, cols, names);
  CHECK(same.mean == norm.mean);
  CHECK(same.sd == norm.sd);

  const Eigen::VectorXd col = f.records.col(2);
  CHECK((norm.invert_column(2, norm.apply_column(2, col)) - col).cwiseAbs().maxCoeff() < 1e-12);

  auto flat = f;
  flat.records.col(1).setConstant(3.0);
  try {
    fit_normalizer(flat.records, split.train_indices, cols, names);
    FAIL("expected a constant-column error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("S1") != std::string::npos);
  }
}

TEST_CASE("correlation matrix") {
  const auto f = fixture();
  const Eigen::MatrixXd c = correlation_matrix(f);
  for (Eigen::Index i = 0; i < 10; ++i) {
    CHECK(c(i, i) == 1.0);
    for (Eigen::Index j = 0; j < 10; ++j) {
      std::vector<double> a, b;
      for (Eigen::Index r = 0; r < f.records.rows(); ++r) a.push_back(f.records(r, i)), b.push_back(f.records(r, j));
      CHECK(std::fabs(c(i, j) - oracle::pearson(a, b)) < 1e-12);
    }
  }
  const auto twins = parse("timestamp,A,B,C\n1,1,1,5\n2,2,2,3\n3,4,4,4\n");
  CHECK(correlation_matrix(twins)(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
}
