#include "empscen/cvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "empscen/errors.hpp"
#include "empscen/omp.hpp"
#include "empscen/sample_panel.hpp"

namespace empscen {

double cvar_empirical(const Eigen::VectorXd& losses, const Eigen::VectorXd& weights,
                      double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw InvalidInputError("cvar_empirical: alpha must be in (0, 1)");
  if (losses.size() != weights.size() || losses.size() < 1)
    throw InvalidInputError("cvar_empirical: losses and weights must match and be nonempty");

  // the objective is piecewise linear and convex in t with breakpoints at
  // the loss values, so scanning them is exact
  const double factor = 1.0 / (1.0 - alpha);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < losses.size(); ++k) {
    const double t = losses[k];
    double tail = 0.0;
    for (Eigen::Index i = 0; i < losses.size(); ++i)
      tail += weights[i] * std::max(losses[i] - t, 0.0);
    best = std::min(best, t + factor * tail);
  }
  return best;
}

CvarSolution optimize_cvar(const CvarProblem& problem) {
  const Eigen::Index d = problem.mu.size();
  const Eigen::Index r = problem.scenario_returns.rows();
  if (problem.scenario_returns.cols() != d || problem.scenario_weights.size() != r)
    throw InvalidInputError("optimize_cvar: dimension mismatch");
  if (problem.alpha <= 0.0 || problem.alpha >= 1.0)
    throw InvalidInputError("optimize_cvar: alpha must be in (0, 1)");

  // variables: (w_1..d, t, u_1..r)
  const Eigen::Index n = d + 1 + r;
  LpProblem lp;
  lp.c = Eigen::VectorXd::Zero(n);
  lp.c.head(d) = -problem.mu;

  const double factor = 1.0 / (1.0 - problem.alpha);
  lp.A_ub = Eigen::MatrixXd::Zero(1 + r, n);
  lp.b_ub = Eigen::VectorXd::Zero(1 + r);
  lp.A_ub(0, d) = 1.0;
  for (Eigen::Index i = 0; i < r; ++i) lp.A_ub(0, d + 1 + i) = factor * problem.scenario_weights[i];
  lp.b_ub[0] = problem.delta;
  // u_i >= -w^T r_i - t  <=>  -r_i^T w - t - u_i <= 0
  for (Eigen::Index i = 0; i < r; ++i) {
    lp.A_ub.row(1 + i).head(d) = -problem.scenario_returns.row(i);
    lp.A_ub(1 + i, d) = -1.0;
    lp.A_ub(1 + i, d + 1 + i) = -1.0;
  }

  lp.A_eq = Eigen::MatrixXd::Zero(1, n);
  lp.A_eq.row(0).head(d).setOnes();
  lp.b_eq = Eigen::VectorXd::Ones(1);

  lp.lower = Eigen::VectorXd::Zero(n);
  lp.lower[d] = -std::numeric_limits<double>::infinity();  // the threshold t is free

  LpSolution lpsol = solve_lp(lp);
  CvarSolution out;
  out.status = lpsol.status;
  if (lpsol.status == LpStatus::unbounded)
    throw NumericalBreakdownError("optimize_cvar: unbounded LP despite a compact feasible set");
  if (lpsol.status != LpStatus::optimal) return out;

  out.w = lpsol.x.head(d);
  out.expected_return = problem.mu.dot(out.w);
  Eigen::VectorXd losses = -(problem.scenario_returns * out.w);
  out.scenario_cvar = cvar_empirical(losses, problem.scenario_weights, problem.alpha);
  return out;
}

BacktestReport backtest(const Eigen::VectorXd& w, const ReturnsPanel& panel, double alpha) {
  if (panel.dim() != w.size()) throw InvalidInputError("backtest: dimension mismatch");
  BacktestReport report;
  Eigen::VectorXd portfolio = panel.returns * w;
  report.mean_return = portfolio.mean();
  Eigen::VectorXd uniform =
      Eigen::VectorXd::Constant(panel.size(), 1.0 / static_cast<double>(panel.size()));
  report.empirical_cvar = cvar_empirical(-portfolio, uniform, alpha);
  return report;
}

double empirical_quantile(Eigen::VectorXd values, double level) {
  if (values.size() < 1) throw InvalidInputError("empirical_quantile: empty sample");
  if (level <= 0.0 || level > 1.0)
    throw InvalidInputError("empirical_quantile: level must be in (0, 1]");
  std::sort(values.data(), values.data() + values.size());
  const auto k = static_cast<Eigen::Index>(
      std::ceil(level * static_cast<double>(values.size())));
  return values[std::min(values.size() - 1, std::max<Eigen::Index>(k - 1, 0))];
}

PortfolioReport run_portfolio(const ReturnsPanel& data, const PortfolioConfig& config) {
  if (config.train_size < 1 || config.train_size >= data.size())
    throw InvalidInputError("run_portfolio: train size must leave a nonempty test block");

  PortfolioReport report;
  report.train_size = config.train_size;
  report.test_size = data.size() - config.train_size;

  ReturnsPanel train;
  train.returns = data.returns.topRows(config.train_size);
  ReturnsPanel test;
  test.returns = data.returns.bottomRows(report.test_size);

  // stage one: scenario extraction on the training block
  ExtractOptions extract;
  extract.q = config.q;
  extract.tolerance = config.tolerance;
  extract.max_iter = config.max_iter;
  extract.embed_max_rank = config.embed_max_rank;
  extract.admm = config.admm;
  ExtractResult extraction = extract_scenarios(SamplePanel{train.returns}, extract);
  report.scenarios = extraction.scenarios;
  report.n_scenarios = extraction.scenarios.size();

  const Eigen::MatrixXd& scenario_returns = report.scenarios.points;
  const Eigen::VectorXd& scenario_weights = report.scenarios.weights;
  // expected returns under the scenario measure
  Eigen::VectorXd mu = scenario_returns.transpose() * scenario_weights;

  // delta grid: loss quantiles of the naive rule w = (1/d) 1 on train,
  // unless explicit caps were configured
  const Eigen::Index d = data.dim();
  Eigen::VectorXd naive = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  Eigen::VectorXd naive_losses = -(train.returns * naive);

  struct DeltaEntry {
    double delta;
    double quantile;
  };
  std::vector<DeltaEntry> delta_grid;
  if (!config.deltas.empty()) {
    for (double delta : config.deltas) delta_grid.push_back({delta, 0.0});
  } else {
    for (double quantile : config.delta_quantiles)
      delta_grid.push_back({empirical_quantile(naive_losses, 1.0 - quantile), quantile});
  }

  for (double alpha : config.alphas) {
    for (const DeltaEntry& entry : delta_grid) {
      PortfolioCell cell;
      cell.alpha = alpha;
      cell.delta_quantile = entry.quantile;
      cell.delta = entry.delta;

      CvarProblem problem;
      problem.mu = mu;
      problem.scenario_returns = scenario_returns;
      problem.scenario_weights = scenario_weights;
      problem.alpha = alpha;
      problem.delta = cell.delta;

      CvarSolution solution = optimize_cvar(problem);
      cell.status = solution.status;
      if (solution.status == LpStatus::optimal) {
        cell.weights = solution.w;
        cell.scenario_mean = solution.expected_return;
        cell.scenario_cvar = solution.scenario_cvar;
        BacktestReport on_train = backtest(solution.w, train, alpha);
        cell.train_mean = on_train.mean_return;
        cell.train_cvar = on_train.empirical_cvar;
        BacktestReport on_test = backtest(solution.w, test, alpha);
        cell.test_mean = on_test.mean_return;
        cell.test_cvar = on_test.empirical_cvar;
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

nlohmann::json portfolio_report_json(const PortfolioReport& report,
                                     const PortfolioConfig& config) {
  nlohmann::json j;
  j["train_size"] = report.train_size;
  j["test_size"] = report.test_size;
  j["n_scenarios"] = report.n_scenarios;
  j["config"] = {
      {"q", config.q},
      {"tolerance", config.tolerance},
      {"max_iter", config.max_iter},
      {"embed_max_rank", config.embed_max_rank},
      {"alphas", config.alphas},
      {"delta_quantiles", config.delta_quantiles},
      {"seed", config.seed},
      {"admm", {{"rho", config.admm.rho},
                {"max_iter", config.admm.max_iter},
                {"primal_tol", config.admm.primal_tol},
                {"dual_tol", config.admm.dual_tol}}},
  };
  nlohmann::json cells = nlohmann::json::array();
  for (const PortfolioCell& cell : report.cells) {
    nlohmann::json c;
    c["alpha"] = cell.alpha;
    c["delta"] = cell.delta;
    c["delta_quantile"] = cell.delta_quantile;
    c["status"] = to_string(cell.status);
    if (cell.status == LpStatus::optimal) {
      c["weights"] = std::vector<double>(cell.weights.data(),
                                         cell.weights.data() + cell.weights.size());
      c["scenario_mean"] = cell.scenario_mean;
      c["scenario_cvar"] = cell.scenario_cvar;
      c["train_mean"] = cell.train_mean;
      c["train_cvar"] = cell.train_cvar;
      c["test_mean"] = cell.test_mean;
      c["test_cvar"] = cell.test_cvar;
    }
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j;
}

}  // namespace empscen
