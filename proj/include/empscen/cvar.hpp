#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "json.hpp"

#include "empscen/lp.hpp"
#include "empscen/returns.hpp"
#include "empscen/scenario_set.hpp"
#include "empscen/weights.hpp"

namespace empscen {

/// Expected shortfall of a discrete loss distribution at level alpha:
///   min_t t + (1/(1-alpha)) sum_i w_i max(l_i - t, 0),
/// computed exactly by scanning t over the loss values.
double cvar_empirical(const Eigen::VectorXd& losses, const Eigen::VectorXd& weights,
                      double alpha);

/// Expected-return maximization under an expected-shortfall cap over a
/// scenario distribution, long-only and fully invested.
struct CvarProblem {
  Eigen::VectorXd mu;                // d expected returns
  Eigen::MatrixXd scenario_returns;  // r x d
  Eigen::VectorXd scenario_weights;  // r
  double alpha = 0.95;
  double delta = 1.0;  // largest acceptable loss (percent)
};

struct CvarSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd w;
  double expected_return = 0.0;
  double scenario_cvar = 0.0;
};

/// Linearization via an auxiliary threshold variable and hinge slacks:
///   minimize -w^T mu
///   s.t. t + (1/(1-alpha)) sum_i w_i u_i <= delta,
///        u_i >= -w^T r_i - t, u_i >= 0, w >= 0, 1^T w = 1,
/// solved with the internal dense simplex.
CvarSolution optimize_cvar(const CvarProblem& problem);

struct BacktestReport {
  double mean_return = 0.0;
  double empirical_cvar = 0.0;
};

/// Mean of w^T r over the panel rows and the expected shortfall of the
/// losses -w^T r under uniform weights.
BacktestReport backtest(const Eigen::VectorXd& w, const ReturnsPanel& panel, double alpha);

struct PortfolioConfig {
  int q = 2;
  double tolerance = 1e-3;
  Eigen::Index max_iter = 150;
  Eigen::Index embed_max_rank = 300;
  Eigen::Index train_size = 2000;
  std::vector<double> alphas{0.95, 0.98, 0.99};
  std::vector<double> delta_quantiles{0.01, 0.02, 0.05};
  /// Explicit caps (percent loss); when nonempty they replace the
  /// quantile-derived grid. Infeasible cells are reported, not fatal.
  std::vector<double> deltas;
  AdmmConfig admm;
  std::uint64_t seed = 0;
};

struct PortfolioCell {
  double alpha = 0.0;
  double delta = 0.0;
  double delta_quantile = 0.0;
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd weights;
  double scenario_mean = 0.0;
  double scenario_cvar = 0.0;
  double train_mean = 0.0;
  double train_cvar = 0.0;
  double test_mean = 0.0;
  double test_cvar = 0.0;
};

struct PortfolioReport {
  std::vector<PortfolioCell> cells;
  ScenarioSet scenarios;
  Eigen::Index train_size = 0;
  Eigen::Index test_size = 0;
  Eigen::Index n_scenarios = 0;
};

/// Train/test split, scenario extraction on the training block, the
/// (alpha, delta) sweep with delta taken from naive-rule loss quantiles,
/// and backtests of each optimized portfolio.
PortfolioReport run_portfolio(const ReturnsPanel& data, const PortfolioConfig& config);

nlohmann::json portfolio_report_json(const PortfolioReport& report, const PortfolioConfig& config);

/// Empirical upper quantile: smallest order statistic covering `level` mass.
double empirical_quantile(Eigen::VectorXd values, double level);

}  // namespace empscen
