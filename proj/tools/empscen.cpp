// Command-line front end: scenario extraction, the benchmark sweep and the
// CVaR portfolio pipeline. Exit codes: 0 success, 1 runtime failure,
// 2 usage/configuration error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "empscen/bench.hpp"
#include "empscen/covariance.hpp"
#include "empscen/cvar.hpp"
#include "empscen/errors.hpp"
#include "empscen/ghtp.hpp"
#include "empscen/lasserre.hpp"
#include "empscen/maxvol.hpp"
#include "empscen/multi_index.hpp"
#include "empscen/omp.hpp"
#include "empscen/rng.hpp"

namespace {

using empscen::InvalidInputError;

constexpr const char* kVersion = "0.1.0";

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write output file: " + path);
  out << j.dump(2) << '\n';
}

nlohmann::json metadata_block(const std::string& command, std::uint64_t seed) {
  return {{"command", command}, {"seed", seed}, {"version", kVersion}};
}

struct ExtractCli {
  std::string input;
  std::string output_prefix = "scenarios";
  std::string algo = "omp";
  int q = 1;
  double tol = 1e-8;
  long long max_iter = 0;
  long long embed_max_rank = 0;
  std::uint64_t seed = 0;
  empscen::AdmmConfig admm;
};

int cmd_extract(const ExtractCli& cli) {
  if (!std::filesystem::exists(cli.input))
    throw InvalidInputError("input file does not exist: " + cli.input);
  const empscen::SamplePanel panel = empscen::load_panel_csv(cli.input);
  const empscen::ScenarioSource source = empscen::scenario_source_from_string(cli.algo);
  if (source == empscen::ScenarioSource::covariance && cli.q != 1)
    throw InvalidInputError("covariance scenarios are defined for q = 1 only");

  empscen::ScenarioSet scenarios;
  empscen::OmpTrace trace;
  bool have_trace = false;

  const int two_q = 2 * cli.q;
  long long max_iter = cli.max_iter;
  if (max_iter <= 0)
    max_iter = empscen::basis_size(static_cast<int>(panel.dim()), two_q);

  switch (source) {
    case empscen::ScenarioSource::covariance: {
      scenarios = empscen::covariance_scenarios(empscen::moment_matrix(panel, 1));
      break;
    }
    case empscen::ScenarioSource::omp:
    case empscen::ScenarioSource::maxvol:
    case empscen::ScenarioSource::ghtp: {
      empscen::ExtractOptions opts;
      opts.q = cli.q;
      opts.tolerance = cli.tol;
      opts.max_iter = static_cast<Eigen::Index>(max_iter);
      opts.embed_max_rank = static_cast<Eigen::Index>(cli.embed_max_rank);
      opts.admm = cli.admm;
      empscen::ExtractResult result = empscen::extract_with(panel, source, opts);
      scenarios = std::move(result.scenarios);
      trace = std::move(result.trace);
      have_trace = source == empscen::ScenarioSource::omp;
      break;
    }
    case empscen::ScenarioSource::lasserre: {
      scenarios = empscen::lasserre_from_panel(panel, cli.q, cli.seed, cli.admm);
      break;
    }
  }

  empscen::save_scenarios_csv(scenarios, cli.output_prefix + ".csv");
  nlohmann::json j = empscen::scenario_set_json(scenarios, have_trace ? &trace : nullptr);
  j["metadata"] = metadata_block("extract", cli.seed);
  j["metadata"]["algorithm"] = cli.algo;
  j["metadata"]["q"] = cli.q;
  j["metadata"]["tolerance"] = cli.tol;
  j["metadata"]["max_iter"] = max_iter;
  j["metadata"]["input"] = cli.input;
  write_json(j, cli.output_prefix + ".json");
  std::cout << "wrote " << scenarios.size() << " scenarios to " << cli.output_prefix
            << ".csv\n";
  return 0;
}

struct BenchCli {
  std::vector<int> dims{2, 5, 10};
  std::vector<int> qs{1, 2};
  std::vector<std::string> algos{"covariance", "omp", "maxvol", "ghtp"};
  int clusters = 5;
  std::string cov_mode = "random_pd";
  std::string mix_mode = "random";
  long long n_samples = 2000;
  int reps = 5;
  std::uint64_t seed = 0;
  int workers = 0;
  double tol = 1e-3;
  long long max_iter = 0;
  long long embed_max_rank = 0;
  std::string output_prefix = "bench";
  empscen::AdmmConfig admm;
};

int cmd_bench(const BenchCli& cli) {
  const empscen::CovarianceMode cov = empscen::covariance_mode_from_string(cli.cov_mode);
  const empscen::MixingMode mix = empscen::mixing_mode_from_string(cli.mix_mode);

  empscen::Rng root(cli.seed);
  std::vector<empscen::BenchCell> grid;
  for (const std::string& algo_name : cli.algos) {
    const empscen::ScenarioSource algo = empscen::scenario_source_from_string(algo_name);
    for (int q : cli.qs) {
      if (algo == empscen::ScenarioSource::covariance && q != 1) continue;
      for (int d : cli.dims) {
        for (int rep = 0; rep < cli.reps; ++rep) {
          empscen::BenchCell cell;
          cell.spec.d = d;
          cell.spec.clusters = cli.clusters;
          cell.spec.covariance = cov;
          cell.spec.mixing = mix;
          cell.spec.n_samples = static_cast<Eigen::Index>(cli.n_samples);
          // one substream per (d, rep) so every algorithm and q sees the
          // same panels
          cell.spec.seed = root.split("panel")
                               .split(static_cast<std::uint64_t>(d))
                               .split(static_cast<std::uint64_t>(rep))
                               .next_u64();
          cell.q = q;
          cell.algorithm = algo;
          cell.rep = rep;
          grid.push_back(cell);
        }
      }
    }
  }
  if (grid.empty())
    throw InvalidInputError(
        "empty benchmark grid (covariance scenarios are defined for q = 1 only)");

  empscen::BenchOptions options;
  options.tolerance = cli.tol;
  options.max_iter = static_cast<Eigen::Index>(cli.max_iter);
  options.embed_max_rank = static_cast<Eigen::Index>(cli.embed_max_rank);
  options.workers =
      cli.workers > 0 ? cli.workers : static_cast<int>(std::thread::hardware_concurrency());
  options.admm = cli.admm;

  std::vector<empscen::BenchRecord> records = empscen::run_benchmark(grid, options);
  empscen::write_bench_csv(records, cli.output_prefix + ".csv");
  nlohmann::json summary;
  summary["metadata"] = metadata_block("bench", cli.seed);
  summary["metadata"]["n_samples"] = cli.n_samples;
  summary["metadata"]["clusters"] = cli.clusters;
  summary["metadata"]["cov_mode"] = cli.cov_mode;
  summary["metadata"]["mix_mode"] = cli.mix_mode;
  summary["metadata"]["tolerance"] = cli.tol;
  summary["metadata"]["reps"] = cli.reps;
  summary["per_algorithm"] = empscen::bench_summary(records);
  write_json(summary, cli.output_prefix + "_summary.json");

  int failures = 0;
  for (const auto& r : records)
    if (!r.ok) ++failures;
  std::cout << "ran " << records.size() << " cells (" << failures << " failures); wrote "
            << cli.output_prefix << ".csv\n";
  return 0;
}

struct PortfolioCli {
  std::string input;
  std::string format = "famafrench";
  std::string output_prefix = "portfolio";
  long long train_size = 0;  // 0 = 10000 for files, 2000 synthetic
  long long synthetic_t = 3000;
  int simulations = 1;
  std::uint64_t seed = 0;
  empscen::PortfolioConfig config;
};

int cmd_portfolio(const PortfolioCli& cli) {
  empscen::PortfolioConfig config = cli.config;
  config.seed = cli.seed;

  const bool synthetic = cli.input.empty();
  auto load = [&](std::uint64_t sim_seed) -> empscen::ReturnsPanel {
    if (synthetic)
      return empscen::synthetic_returns(sim_seed, static_cast<Eigen::Index>(cli.synthetic_t));
    if (!std::filesystem::exists(cli.input))
      throw InvalidInputError("input file does not exist: " + cli.input);
    const auto format = cli.format == "plain" ? empscen::ReturnsFormat::plain_csv
                                              : empscen::ReturnsFormat::famafrench_csv;
    return empscen::load_returns(cli.input, format);
  };

  if (cli.train_size > 0)
    config.train_size = static_cast<Eigen::Index>(cli.train_size);
  else
    config.train_size = synthetic ? 2000 : 10000;

  std::vector<nlohmann::json> reports;
  std::ofstream sweep;
  if (cli.simulations > 1) {
    sweep.open(cli.output_prefix + "_sweep.csv");
    if (!sweep) throw InvalidInputError("cannot write sweep file");
    sweep.precision(17);
    sweep << "simulation,alpha,delta_quantile,delta,status,train_mean,train_cvar,"
             "test_mean,test_cvar\n";
  }

  int infeasible_cells = 0;
  for (int sim = 0; sim < cli.simulations; ++sim) {
    const std::uint64_t sim_seed = empscen::Rng(cli.seed).split("simulation")
                                       .split(static_cast<std::uint64_t>(sim))
                                       .next_u64();
    empscen::ReturnsPanel data = load(sim_seed);
    empscen::PortfolioConfig sim_config = config;
    sim_config.seed = sim_seed;
    empscen::PortfolioReport report = empscen::run_portfolio(data, sim_config);
    for (const auto& cell : report.cells) {
      if (cell.status != empscen::LpStatus::optimal) ++infeasible_cells;
      if (sweep.is_open())
        sweep << sim << ',' << cell.alpha << ',' << cell.delta_quantile << ',' << cell.delta
              << ',' << empscen::to_string(cell.status) << ',' << cell.train_mean << ','
              << cell.train_cvar << ',' << cell.test_mean << ',' << cell.test_cvar << '\n';
    }
    if (sim == 0) {
      nlohmann::json j = empscen::portfolio_report_json(report, sim_config);
      j["metadata"] = metadata_block("portfolio", cli.seed);
      j["metadata"]["input"] = synthetic ? "synthetic" : cli.input;
      j["metadata"]["simulations"] = cli.simulations;
      write_json(j, cli.output_prefix + ".json");
    }
  }

  std::cout << "portfolio sweep complete";
  if (infeasible_cells > 0)
    std::cout << " (warning: " << infeasible_cells << " cells not optimal)";
  std::cout << "; wrote " << cli.output_prefix << ".json\n";
  return 0;
}

void add_admm_flags(CLI::App* app, empscen::AdmmConfig& admm) {
  app->add_option("--admm-rho", admm.rho, "ADMM penalty parameter");
  app->add_option("--admm-max-iter", admm.max_iter, "ADMM iteration cap");
  app->add_option("--admm-tol", admm.primal_tol, "ADMM primal/dual tolerance")
      ->each([&admm](const std::string& value) { admm.dual_tol = std::stod(value); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"empirical scenario extraction toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; flags win over file values");

  ExtractCli extract;
  CLI::App* ex = app.add_subcommand("extract", "extract scenarios from a sample CSV");
  ex->add_option("--input", extract.input, "headerless CSV panel, d floats per row")->required();
  ex->add_option("--output-prefix", extract.output_prefix, "output path prefix");
  ex->add_option("--algo", extract.algo, "covariance|omp|maxvol|ghtp|lasserre")
      ->check(CLI::IsMember({"covariance", "omp", "maxvol", "ghtp", "lasserre"}));
  ex->add_option("--q", extract.q, "half degree: moments up to 2q are matched");
  ex->add_option("--tol", extract.tol, "relative selection residual target");
  ex->add_option("--max-iter", extract.max_iter, "selection iteration cap (0 = dim P_2q)");
  ex->add_option("--embed-max-rank", extract.embed_max_rank,
                 "cap on the orthonormal embedding rank (0 = exhaust)");
  ex->add_option("--seed", extract.seed, "master seed");
  add_admm_flags(ex, extract.admm);

  BenchCli bench;
  CLI::App* be = app.add_subcommand("bench", "Gaussian-mixture benchmark sweep");
  be->add_option("--dims", bench.dims, "dimensions to sweep");
  be->add_option("--qs", bench.qs, "half degrees to sweep");
  be->add_option("--algos", bench.algos, "algorithms to run");
  be->add_option("--clusters", bench.clusters, "mixture components");
  be->add_option("--cov-mode", bench.cov_mode, "random_pd|identity")
      ->check(CLI::IsMember({"random_pd", "identity"}));
  be->add_option("--mix-mode", bench.mix_mode, "random|equal")
      ->check(CLI::IsMember({"random", "equal"}));
  be->add_option("--n", bench.n_samples, "samples per panel");
  be->add_option("--reps", bench.reps, "replicate panels per cell");
  be->add_option("--seed", bench.seed, "master seed");
  be->add_option("--workers", bench.workers, "worker threads (0 = hardware)");
  be->add_option("--tol", bench.tol, "relative selection residual target");
  be->add_option("--max-iter", bench.max_iter, "selection iteration cap (0 = dim P_2q)");
  be->add_option("--embed-max-rank", bench.embed_max_rank, "embedding rank cap (0 = exhaust)");
  be->add_option("--output-prefix", bench.output_prefix, "output path prefix");
  add_admm_flags(be, bench.admm);

  PortfolioCli portfolio;
  CLI::App* po = app.add_subcommand("portfolio", "CVaR-constrained portfolio pipeline");
  po->add_option("--input", portfolio.input, "returns CSV (omit for synthetic data)");
  po->add_option("--format", portfolio.format, "famafrench|plain")
      ->check(CLI::IsMember({"famafrench", "plain"}));
  po->add_option("--output-prefix", portfolio.output_prefix, "output path prefix");
  po->add_option("--train-size", portfolio.train_size,
                 "training rows (0 = 10000 for files, 2000 synthetic)");
  po->add_option("--synthetic-t", portfolio.synthetic_t, "total synthetic rows");
  po->add_option("--simulations", portfolio.simulations,
                 "seeded repetitions aggregated into the sweep CSV");
  po->add_option("--seed", portfolio.seed, "master seed");
  po->add_option("--q", portfolio.config.q, "half degree for scenario extraction");
  po->add_option("--tol", portfolio.config.tolerance, "relative selection residual target");
  po->add_option("--max-iter", portfolio.config.max_iter, "scenario cap");
  po->add_option("--embed-max-rank", portfolio.config.embed_max_rank, "embedding rank cap");
  po->add_option("--alphas", portfolio.config.alphas, "confidence levels");
  po->add_option("--delta-quantiles", portfolio.config.delta_quantiles,
                 "naive-rule loss quantile levels defining the caps");
  po->add_option("--deltas", portfolio.config.deltas,
                 "explicit loss caps in percent, overriding the quantile grid");
  add_admm_flags(po, portfolio.config.admm);

  try {
    app.parse(argc, argv);
    if (ex->parsed()) return cmd_extract(extract);
    if (be->parsed()) return cmd_bench(bench);
    if (po->parsed()) return cmd_portfolio(portfolio);
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  } catch (const InvalidInputError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
