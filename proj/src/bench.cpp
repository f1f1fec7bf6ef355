#include "empscen/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <thread>

#include "empscen/covariance.hpp"
#include "empscen/errors.hpp"
#include "empscen/ghtp.hpp"
#include "empscen/lasserre.hpp"
#include "empscen/maxvol.hpp"
#include "empscen/multi_index.hpp"
#include "empscen/omp.hpp"
#include "empscen/rng.hpp"

namespace empscen {

Eigen::Index count_scenarios(const Eigen::VectorXd& weights, double threshold) {
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    if (weights[i] >= threshold) ++count;
  return count;
}

namespace {

/// Atomic panel for the flat-extraction baseline: the mixture means sampled
/// according to the mixing proportions. Generic empirical panels admit no
/// flat moment extension without a semidefinite search, so this baseline is
/// benchmarked on inputs that have one by construction.
SamplePanel atomic_panel(const GmmSpec& spec) {
  // same mean/mixing draws as gen_gmm for this seed, but each sample sits
  // exactly on its cluster mean
  Rng root(spec.seed);
  Rng mean_rng = root.split("means");
  Eigen::MatrixXd means(spec.clusters, spec.d);
  for (int k = 0; k < spec.clusters; ++k)
    for (int j = 0; j < spec.d; ++j) means(k, j) = mean_rng.uniform(-50.0, 50.0);
  Rng mix_rng = root.split("mixing");
  Eigen::VectorXd mixing(spec.clusters);
  if (spec.mixing == MixingMode::equal) {
    mixing.setConstant(1.0 / spec.clusters);
  } else {
    for (int k = 0; k < spec.clusters; ++k) mixing[k] = mix_rng.uniform01();
    mixing /= mixing.sum();
  }
  Eigen::VectorXd cumulative(spec.clusters);
  double acc = 0.0;
  for (int k = 0; k < spec.clusters; ++k) {
    acc += mixing[k];
    cumulative[k] = acc;
  }
  cumulative[spec.clusters - 1] = 1.0;
  Rng sample_rng = root.split("atom-samples");
  Eigen::MatrixXd data(spec.n_samples, spec.d);
  for (Eigen::Index i = 0; i < spec.n_samples; ++i) {
    const double u = sample_rng.uniform01();
    int k = 0;
    while (u > cumulative[k]) ++k;
    data.row(i) = means.row(k);
  }
  return SamplePanel{std::move(data)};
}

BenchRecord run_cell(const BenchCell& cell, const BenchOptions& options) {
  BenchRecord record;
  record.algorithm = cell.algorithm;
  record.d = cell.spec.d;
  record.clusters = cell.spec.clusters;
  record.q = cell.q;
  record.cov_mode = cell.spec.covariance;
  record.mix_mode = cell.spec.mixing;
  record.n_samples = cell.spec.n_samples;
  record.seed = cell.spec.seed;
  record.rep = cell.rep;

  try {
    if (cell.algorithm == ScenarioSource::covariance && cell.q != 1)
      throw InvalidInputError("covariance scenarios are defined for q = 1 only");

    const SamplePanel panel = cell.algorithm == ScenarioSource::lasserre
                                  ? atomic_panel(cell.spec)
                                  : gen_gmm(cell.spec);
    const int two_q = 2 * cell.q;
    Eigen::Index max_iter = options.max_iter;
    if (max_iter <= 0) max_iter = static_cast<Eigen::Index>(basis_size(cell.spec.d, two_q));

    const auto start = std::chrono::steady_clock::now();
    ScenarioSet scenarios;
    switch (cell.algorithm) {
      case ScenarioSource::covariance: {
        scenarios = covariance_scenarios(moment_matrix(panel, 1));
        break;
      }
      case ScenarioSource::omp:
      case ScenarioSource::maxvol:
      case ScenarioSource::ghtp: {
        ExtractOptions opts;
        opts.q = cell.q;
        opts.tolerance = options.tolerance;
        opts.max_iter = max_iter;
        opts.embed_max_rank = options.embed_max_rank;
        opts.admm = options.admm;
        scenarios = extract_with(panel, cell.algorithm, opts).scenarios;
        break;
      }
      case ScenarioSource::lasserre: {
        scenarios = lasserre_from_panel(panel, cell.q,
                                        Rng(cell.spec.seed).split("lasserre").next_u64(),
                                        options.admm);
        break;
      }
    }

    MomentMatrix M_q = moment_matrix(panel, cell.q);
    VandermondeMatrix V_q = vandermonde(scenarios.points, cell.q);
    record.relative_error = relative_error(M_q, V_q, scenarios.weights);
    const auto stop = std::chrono::steady_clock::now();

    record.n_scenarios = count_scenarios(scenarios.weights);
    record.wall_time_seconds = std::chrono::duration<double>(stop - start).count();
    record.ok = true;
  } catch (const std::exception& e) {
    record.ok = false;
    record.message = e.what();
    record.relative_error = std::numeric_limits<double>::quiet_NaN();
    record.n_scenarios = 0;
  }
  return record;
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const std::vector<BenchCell>& grid,
                                       const BenchOptions& options) {
  std::vector<BenchRecord> records(grid.size());
  const int workers = std::max(1, options.workers);
  if (workers == 1 || grid.size() <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) records[i] = run_cell(grid[i], options);
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int thread_count = std::min<int>(workers, static_cast<int>(grid.size()));
  pool.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= grid.size()) return;
        records[i] = run_cell(grid[i], options);
      }
    });
  }
  for (auto& thread : pool) thread.join();
  return records;
}

void write_bench_csv(const std::vector<BenchRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write benchmark file: " + path);
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "algorithm,d,clusters,q,cov_mode,mix_mode,n_samples,seed,rep,ok,"
         "relative_error,n_scenarios,wall_time_seconds,message\n";
  for (const BenchRecord& r : records) {
    out << to_string(r.algorithm) << ',' << r.d << ',' << r.clusters << ',' << r.q << ','
        << to_string(r.cov_mode) << ',' << to_string(r.mix_mode) << ',' << r.n_samples << ','
        << r.seed << ',' << r.rep << ',' << (r.ok ? 1 : 0) << ',';
    if (r.ok)
      out << r.relative_error;
    else
      out << "nan";
    out << ',' << r.n_scenarios << ',' << r.wall_time_seconds << ',';
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out << msg << '\n';
  }
}

namespace {

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t h = values.size() / 2;
  return values.size() % 2 == 1 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

}  // namespace

nlohmann::json bench_summary(const std::vector<BenchRecord>& records) {
  std::map<std::string, std::vector<const BenchRecord*>> by_algo;
  for (const BenchRecord& r : records) by_algo[to_string(r.algorithm)].push_back(&r);

  nlohmann::json summary;
  for (const auto& [name, list] : by_algo) {
    std::vector<double> errors, counts, times;
    int failures = 0;
    for (const BenchRecord* r : list) {
      if (!r->ok) {
        ++failures;
        continue;
      }
      errors.push_back(r->relative_error);
      counts.push_back(static_cast<double>(r->n_scenarios));
      times.push_back(r->wall_time_seconds);
    }
    summary[name] = {
        {"cells", list.size()},
        {"failures", failures},
        {"median_relative_error", median(errors)},
        {"median_n_scenarios", median(counts)},
        {"median_wall_time_seconds", median(times)},
    };
  }
  return summary;
}

}  // namespace empscen
