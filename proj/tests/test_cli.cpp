#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

const std::string kCli = EMPSCEN_CLI_PATH;

int run(const std::string& args) {
  const std::string command = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Strips wall-time fields so deterministic parts can be compared verbatim.
std::string strip_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  bool header = true;
  int timing_column = -1;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    int column = 0;
    bool first = true;
    while (std::getline(cells, cell, ',')) {
      if (header && cell == "wall_time_seconds") timing_column = column;
      if (column != timing_column) {
        if (!first) out << ',';
        out << cell;
        first = false;
      }
      ++column;
    }
    out << '\n';
    header = false;
  }
  return out.str();
}

struct TempPanel {
  std::string path = "cli_test_panel.csv";
  TempPanel() {
    std::ofstream out(path);
    out << "-1.0\n0.0\n1.0\n";
  }
  ~TempPanel() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("extract: omp on the three-point panel") {
  TempPanel panel;
  const int code =
      run("extract --input " + panel.path +
          " --algo omp --q 1 --tol 1e-12 --output-prefix cli_test_omp");
  REQUIRE(code == 0);

  json j = json::parse(slurp("cli_test_omp.json"));
  CHECK(j["n_scenarios"] == 3);
  CHECK(j["source"] == "omp");
  for (const auto& w : j["weights"]) CHECK(std::abs(w.get<double>() - 1.0 / 3.0) <= 1e-6);
  CHECK(j["metadata"]["algorithm"] == "omp");
  CHECK(j["trace"]["pivot_sequence"].size() == 3);

  // CSV: weight then coordinates, one scenario per row
  std::string csv = slurp("cli_test_omp.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  std::remove("cli_test_omp.json");
  std::remove("cli_test_omp.csv");
}

TEST_CASE("extract: covariance bounds the scenario count by d + 1") {
  std::ofstream out("cli_test_panel3.csv");
  for (int i = 0; i < 50; ++i)
    out << (0.1 * i) << ',' << (0.2 * i - 3.0) << ',' << (i % 7) << '\n';
  out.close();
  const int code = run(
      "extract --input cli_test_panel3.csv --algo covariance --output-prefix cli_test_cov");
  REQUIRE(code == 0);
  json j = json::parse(slurp("cli_test_cov.json"));
  CHECK(j["n_scenarios"].get<int>() <= 4);
  std::remove("cli_test_panel3.csv");
  std::remove("cli_test_cov.json");
  std::remove("cli_test_cov.csv");
}

TEST_CASE("extract: missing input exits with the usage code and names the path") {
  const std::string command = kCli +
      " extract --input nowhere_to_be_found.csv --algo omp 2>cli_test_err.txt >/dev/null";
  const int status = std::system(command.c_str());
  CHECK(WEXITSTATUS(status) == 2);
  CHECK(slurp("cli_test_err.txt").find("nowhere_to_be_found.csv") != std::string::npos);
  std::remove("cli_test_err.txt");
}

TEST_CASE("extract: covariance at q = 2 is a configuration error") {
  TempPanel panel;
  CHECK(run("extract --input " + panel.path + " --algo covariance --q 2") == 2);
}

TEST_CASE("bench: covariance-only at q = 2 is a configuration error") {
  CHECK(run("bench --algos covariance --qs 2 --dims 2 --reps 1 --n 50") == 2);
}

TEST_CASE("bench: tiny grid runs and reproduces byte-identical records minus timings") {
  const std::string base =
      "bench --algos omp covariance --qs 1 --dims 2 --reps 2 --n 120 --clusters 2 --seed 42 "
      "--workers 2 --output-prefix ";
  REQUIRE(run(base + "cli_bench_a") == 0);
  REQUIRE(run(base + "cli_bench_b") == 0);
  CHECK(strip_timing(slurp("cli_bench_a.csv")) == strip_timing(slurp("cli_bench_b.csv")));
  json summary = json::parse(slurp("cli_bench_a_summary.json"));
  CHECK(summary["per_algorithm"].contains("omp"));
  CHECK(summary["per_algorithm"]["omp"]["failures"] == 0);
  CHECK(summary["metadata"]["seed"] == 42);
  for (const std::string p : {"cli_bench_a.csv", "cli_bench_a_summary.json",
                              "cli_bench_b.csv", "cli_bench_b_summary.json"})
    std::remove(p.c_str());
}

TEST_CASE("bench: row count equals the grid size") {
  REQUIRE(run("bench --algos omp --qs 1 --dims 2 3 --reps 2 --n 80 --clusters 2 "
              "--output-prefix cli_bench_rows") == 0);
  std::string csv = slurp("cli_bench_rows.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 2);  // header + dims x reps
  std::remove("cli_bench_rows.csv");
  std::remove("cli_bench_rows_summary.json");
}

TEST_CASE("portfolio: synthetic run emits a 9-cell schema-complete report") {
  REQUIRE(run("portfolio --synthetic-t 400 --train-size 280 --q 1 --max-iter 25 "
              "--seed 11 --output-prefix cli_portfolio") == 0);
  json j = json::parse(slurp("cli_portfolio.json"));
  CHECK(j["cells"].size() == 9);
  CHECK(j["train_size"] == 280);
  CHECK(j["test_size"] == 120);
  for (const auto& cell : j["cells"]) {
    CHECK(cell.contains("alpha"));
    CHECK(cell.contains("delta"));
    CHECK(cell.contains("status"));
    if (cell["status"] == "optimal") {
      CHECK(cell.contains("weights"));
      CHECK(cell.contains("train_cvar"));
      CHECK(cell.contains("test_mean"));
    }
  }
  std::remove("cli_portfolio.json");
}

TEST_CASE("portfolio: impossible caps mark cells infeasible but exit cleanly") {
  const std::string command = kCli +
      " portfolio --synthetic-t 300 --train-size 200 --q 1 --max-iter 10 --deltas -1000000"
      " --output-prefix cli_portfolio_inf >cli_portfolio_inf.out 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(WEXITSTATUS(status) == 0);
  CHECK(slurp("cli_portfolio_inf.out").find("warning") != std::string::npos);
  json j = json::parse(slurp("cli_portfolio_inf.json"));
  REQUIRE(j["cells"].size() == 3);  // 3 alphas x 1 delta
  for (const auto& cell : j["cells"]) CHECK(cell["status"] == "infeasible");
  std::remove("cli_portfolio_inf.json");
  std::remove("cli_portfolio_inf.out");
}

TEST_CASE("portfolio: fixture file reports the split sizes") {
  const std::string fixture = std::string(EMPSCEN_TEST_DATA) + "/famafrench_sample.csv";
  REQUIRE(run("portfolio --input " + fixture +
              " --format famafrench --train-size 2 --q 1 --max-iter 3 "
              "--output-prefix cli_portfolio_ff") == 0);
  json j = json::parse(slurp("cli_portfolio_ff.json"));
  CHECK(j["train_size"] == 2);
  CHECK(j["test_size"] == 1);
  std::remove("cli_portfolio_ff.json");
}

TEST_CASE("help succeeds, unknown flags fail with the usage code") {
  CHECK(run("--help") == 0);
  CHECK(run("extract --no-such-flag") != 0);
}
