#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using windwoa::cli::cli_main;
namespace cli = windwoa::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("windwoa_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("eval on a perfect prediction") {
  const auto dir = scratch("eval");
  write(dir / "perfect.csv", "observed,predicted\n1.5,1.5\n2.0,2.0\n3.25,3.25\n");
  const auto r = run({"eval", (dir / "perfect.csv").string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out ==
        "RMSE,SI,WI,NSE,KGE,R2,RE\n"
        "0.000000,0.000000,1.000000,1.000000,1.000000,1.000000,0.000000\n");
  const auto j = run({"eval", "--input", (dir / "perfect.csv").string(), "--json"});
  CHECK(j.code == cli::kOk);
  CHECK(j.out.find("\"NSE\": 1.0") != std::string::npos);

  write(dir / "flat.csv", "predicted,observed\n1,2\n1,2\n");
  const auto flat = run({"eval", (dir / "flat.csv").string()});
  CHECK(flat.code == cli::kOk);
  CHECK(flat.out.find("undefined") != std::string::npos);

  write(dir / "bad.csv", "observed,predicted\n1,x\n");
  CHECK(run({"eval", (dir / "bad.csv").string()}).code == cli::kDataError);
  write(dir / "nohdr.csv", "a,b\n1,2\n");
  CHECK(run({"eval", (dir / "nohdr.csv").string()}).code == cli::kDataError);
  CHECK(run({"eval", (dir / "missing.csv").string()}).code == cli::kDataError);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"run", "--jobs", "0"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("config and data errors map to exit codes") {
  const auto dir = scratch("errors");
  write(dir / "broken.json", "{ not json");
  CHECK(run({"run", "--config", (dir / "broken.json").string()}).code == cli::kConfigError);
  write(dir / "unknown.json", R"({"repetitionz": 1})");
  const auto u = run({"run", "--config", (dir / "unknown.json").string()});
  CHECK(u.code == cli::kConfigError);
  CHECK(u.err.find("repetitionz") != std::string::npos);
  CHECK(run({"run", "--config", (dir / "absent.json").string()}).code == cli::kConfigError);
  write(dir / "nodata.json", R"({"data": {"path": "missing.csv"}, "repetitions": 1})");
  CHECK(run({"run", "--config", (dir / "nodata.json").string()}).code == cli::kDataError);
  CHECK(run({"woa-bench", "ackley"}).code == cli::kConfigError);
}

TEST_CASE("synth is deterministic") {
  const auto dir = scratch("synth");
  const auto a = run({"synth", "--rows", "3600", "--seed", "7", "--out", (dir / "a.csv").string()});
  const auto b = run({"synth", "--rows", "3600", "--seed", "7", "--out", (dir / "b.csv").string()});
  REQUIRE(a.code == cli::kOk);
  REQUIRE(b.code == cli::kOk);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  const auto c = run({"synth", "--rows", "5", "--seed", "8"});
  CHECK(c.code == cli::kOk);
  std::istringstream lines(c.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("timestamp,Astara,", 0) == 0);
}

TEST_CASE("woa-bench writes traces and a median line") {
  const auto dir = scratch("bench");
  const auto r = run({"woa-bench", "sphere", "--dim", "10", "--iters", "500", "--seeds", "10", "--out", dir.string()});
  REQUIRE(r.code == cli::kOk);
  const auto pos = r.out.find("median,");
  REQUIRE(pos != std::string::npos);
  const double med = std::stod(r.out.substr(pos + 7));
  CHECK(med < 1e-4);
  CHECK(fs::exists(dir / "trace_sphere_seed0.csv"));
  CHECK(slurp(dir / "trace_sphere_seed0.csv").rfind("iteration,best_fitness\n0,", 0) == 0);
}

TEST_CASE("run on a small synthetic config") {
  const auto dir = scratch("run");
  write(dir / "config.json", R"({
    "data": {"synth": {"rows": 150, "seed": 3}},
    "repetitions": 2,
    "mlp": {"hidden": 2, "lm_epochs": 5},
    "woa": {"population": 6, "iterations": 3}
  })");
  const auto r = run({"run", "--config", (dir / "config.json").string(), "--out", (dir / "out").string(),
                      "--seed", "9", "--jobs", "2"});
  CHECK(r.code == cli::kOk);
  CHECK(fs::exists(dir / "out" / "report.csv"));
  CHECK(fs::exists(dir / "out" / "records.jsonl"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  CHECK(fs::is_directory(dir / "out" / "plots"));
  CHECK(slurp(dir / "out" / "manifest.json").find("\"seed\": 9") != std::string::npos);
}

TEST_CASE("failed tasks exit 4 and keep their outputs") {
  const auto dir = scratch("failing");
  std::string csv = "timestamp,A,B,C\n";
  for (int i = 0; i < 40; ++i)
    csv += std::to_string(i) + "," + std::to_string(1 + i % 7) + "," + std::to_string(2 + i % 5) + ",3\n";
  write(dir / "flat.csv", csv);
  write(dir / "config.json", R"({"data": {"path": "flat.csv"}, "repetitions": 1, "mlp": {"lm_epochs": 2},
                                 "woa": {"population": 4, "iterations": 2}})");
  const auto r = run({"run", "--config", (dir / "config.json").string(), "--out", (dir / "out").string()});
  CHECK(r.code == cli::kRuntimeFailure);
  CHECK(fs::exists(dir / "out" / "report.csv"));
  CHECK(slurp(dir / "out" / "report.csv").find("undefined") != std::string::npos);
}
