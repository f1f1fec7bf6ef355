#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "empscen/gmm.hpp"
#include "empscen/scenario_set.hpp"
#include "empscen/weights.hpp"

namespace empscen {

/// Number of weight entries at or above the threshold; entries below count
/// as zero when reporting scenario counts.
Eigen::Index count_scenarios(const Eigen::VectorXd& weights, double threshold = 1e-8);

struct BenchCell {
  GmmSpec spec;
  int q = 1;
  ScenarioSource algorithm = ScenarioSource::omp;
  int rep = 0;
};

struct BenchRecord {
  ScenarioSource algorithm = ScenarioSource::omp;
  int d = 0;
  int clusters = 0;
  int q = 0;
  CovarianceMode cov_mode = CovarianceMode::random_pd;
  MixingMode mix_mode = MixingMode::random;
  Eigen::Index n_samples = 0;
  std::uint64_t seed = 0;
  int rep = 0;
  bool ok = false;
  double relative_error = 0.0;
  Eigen::Index n_scenarios = 0;
  double wall_time_seconds = 0.0;
  std::string message;
};

struct BenchOptions {
  double tolerance = 1e-3;      // relative selection residual
  Eigen::Index max_iter = 0;    // 0 = dim P_{2q}
  Eigen::Index embed_max_rank = 0;
  int workers = 1;
  AdmmConfig admm;
};

/// Runs every cell (generate, extract, retrieve weights, score, count,
/// time), recording failures in place of results so the sweep continues.
/// Timing covers extraction plus weight retrieval only. Cells are mutually
/// independent and run on up to `workers` threads; output order follows the
/// grid, so identical grids and seeds reproduce identical records except for
/// the wall times.
std::vector<BenchRecord> run_benchmark(const std::vector<BenchCell>& grid,
                                       const BenchOptions& options);

/// One record per row. Schema documented in the README.
void write_bench_csv(const std::vector<BenchRecord>& records, const std::string& path);

/// Per-algorithm medians of error, scenario count and wall time.
nlohmann::json bench_summary(const std::vector<BenchRecord>& records);

}  // namespace empscen
