#include "empscen/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "empscen/errors.hpp"

namespace empscen {

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-8;

/// Equality-standard-form tableau: min c^T x, A x = b, x >= 0.
struct StandardForm {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  Eigen::Index n_structural = 0;  // columns before artificials
};

class RevisedSimplex {
 public:
  RevisedSimplex(StandardForm form) : form_(std::move(form)) {
    m_ = form_.A.rows();
    binv_ = Eigen::MatrixXd::Identity(m_, m_);
  }

  Eigen::Index rows() const { return m_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  void set_basis(std::vector<Eigen::Index> basis) {
    basis_ = std::move(basis);
    refactor();
  }

  Eigen::VectorXd basic_solution() const { return binv_ * form_.b; }

  Eigen::VectorXd full_solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(form_.A.cols());
    Eigen::VectorXd xb = basic_solution();
    for (Eigen::Index i = 0; i < m_; ++i) x[basis_[static_cast<std::size_t>(i)]] = std::max(xb[i], 0.0);
    return x;
  }

  /// Bland's rule iteration on the given objective. Returns the status.
  LpStatus iterate(const Eigen::VectorXd& costs, Eigen::Index max_iterations,
                   Eigen::Index& iterations_used) {
    const Eigen::Index n = form_.A.cols();
    std::vector<bool> in_basis(static_cast<std::size_t>(n), false);
    for (Eigen::Index j : basis_) in_basis[static_cast<std::size_t>(j)] = true;

    bool verified = false;  // optimality is only declared on a fresh factorization
    for (Eigen::Index iter = 0; iter < max_iterations; ++iter) {
      Eigen::VectorXd cb(m_);
      for (Eigen::Index i = 0; i < m_; ++i) cb[i] = costs[basis_[static_cast<std::size_t>(i)]];
      Eigen::VectorXd y = binv_.transpose() * cb;

      // entering variable: lowest index with negative reduced cost (Bland)
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (in_basis[static_cast<std::size_t>(j)]) continue;
        const double reduced = costs[j] - y.dot(form_.A.col(j));
        if (reduced < -kReducedCostTol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) {
        if (!verified && pivots_since_refactor_ > 0) {
          refactor();  // guard against drift in the updated inverse
          verified = true;
          --iter;
          continue;
        }
        iterations_used = iter;
        return LpStatus::optimal;
      }
      verified = false;

      Eigen::VectorXd direction = binv_ * form_.A.col(entering);
      Eigen::VectorXd xb = basic_solution();

      // ratio test: among the minimum-ratio rows keep only pivots of
      // comparable magnitude to the largest (tiny pivots wreck the updated
      // inverse on degenerate vertices), then take the smallest basis
      // variable index as in Bland's rule
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (direction[i] <= kPivotTol) continue;
        best_ratio = std::min(best_ratio, std::max(xb[i], 0.0) / direction[i]);
      }
      if (!(best_ratio < std::numeric_limits<double>::infinity())) {
        iterations_used = iter;
        return LpStatus::unbounded;
      }
      const double tie_window = best_ratio + 1e-9 * (1.0 + best_ratio);
      double max_tie_pivot = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (direction[i] <= kPivotTol) continue;
        if (std::max(xb[i], 0.0) / direction[i] <= tie_window)
          max_tie_pivot = std::max(max_tie_pivot, direction[i]);
      }
      Eigen::Index leaving_row = -1;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (direction[i] <= kPivotTol || direction[i] < 1e-4 * max_tie_pivot) continue;
        if (std::max(xb[i], 0.0) / direction[i] > tie_window) continue;
        if (leaving_row < 0 || basis_[static_cast<std::size_t>(i)] <
                                   basis_[static_cast<std::size_t>(leaving_row)])
          leaving_row = i;
      }

      in_basis[static_cast<std::size_t>(basis_[static_cast<std::size_t>(leaving_row)])] = false;
      in_basis[static_cast<std::size_t>(entering)] = true;
      basis_[static_cast<std::size_t>(leaving_row)] = entering;
      update_inverse(direction, leaving_row);
      if (++pivots_since_refactor_ >= 50) refactor();
    }
    iterations_used = max_iterations;
    return LpStatus::iteration_limit;
  }

  /// Pivots zero-level artificial variables out of the basis where possible;
  /// rows that stay artificial are linearly dependent and get deleted.
  void purge_artificials() {
    for (Eigen::Index i = 0; i < m_;) {
      if (basis_[static_cast<std::size_t>(i)] < form_.n_structural) {
        ++i;
        continue;
      }
      Eigen::Index replacement = -1;
      Eigen::VectorXd row = binv_.row(i) * form_.A.leftCols(form_.n_structural);
      for (Eigen::Index j = 0; j < form_.n_structural; ++j) {
        bool basic = false;
        for (Eigen::Index k = 0; k < m_; ++k)
          if (basis_[static_cast<std::size_t>(k)] == j) basic = true;
        if (!basic && std::abs(row[j]) > 1e-9) {
          replacement = j;
          break;
        }
      }
      if (replacement >= 0) {
        Eigen::VectorXd direction = binv_ * form_.A.col(replacement);
        basis_[static_cast<std::size_t>(i)] = replacement;
        update_inverse(direction, i);
        ++i;
      } else {
        // redundant constraint: drop the row entirely
        drop_row(i);
      }
    }
  }

 private:
  void update_inverse(const Eigen::VectorXd& direction, Eigen::Index row) {
    const double pivot = direction[row];
    Eigen::VectorXd scaled = direction / pivot;
    scaled[row] = 1.0 - 1.0 / pivot;
    const Eigen::RowVectorXd pivot_row = binv_.row(row);  // copy: the update touches this row
    binv_.noalias() -= scaled * pivot_row;
  }

  void refactor() {
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i)
      basis_matrix.col(i) = form_.A.col(basis_[static_cast<std::size_t>(i)]);
    binv_ = basis_matrix.partialPivLu().inverse();
    pivots_since_refactor_ = 0;
  }

  void drop_row(Eigen::Index row) {
    const Eigen::Index last = m_ - 1;
    if (row != last) {
      form_.A.row(row).swap(form_.A.row(last));
      std::swap(form_.b[row], form_.b[last]);
      std::swap(basis_[static_cast<std::size_t>(row)], basis_[static_cast<std::size_t>(last)]);
    }
    form_.A.conservativeResize(last, Eigen::NoChange);
    form_.b.conservativeResize(last);
    basis_.pop_back();
    m_ = last;
    refactor();
  }

  StandardForm form_;
  Eigen::Index m_ = 0;
  std::vector<Eigen::Index> basis_;
  Eigen::MatrixXd binv_;
  int pivots_since_refactor_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
  const Eigen::Index n = problem.c.size();
  const Eigen::Index m_ub = problem.A_ub.rows();
  const Eigen::Index m_eq = problem.A_eq.rows();
  if (m_ub > 0 && problem.A_ub.cols() != n)
    throw InvalidInputError("solve_lp: A_ub column count mismatch");
  if (m_eq > 0 && problem.A_eq.cols() != n)
    throw InvalidInputError("solve_lp: A_eq column count mismatch");
  if (problem.b_ub.size() != m_ub || problem.b_eq.size() != m_eq)
    throw InvalidInputError("solve_lp: right-hand side size mismatch");
  if (problem.lower.size() != n)
    throw InvalidInputError("solve_lp: lower bound vector size mismatch");

  // shift finite lower bounds to zero, split free variables
  std::vector<Eigen::Index> pos_col(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> neg_col(static_cast<std::size_t>(n), -1);
  Eigen::Index n_solver = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    pos_col[static_cast<std::size_t>(j)] = n_solver++;
    if (std::isinf(problem.lower[j])) neg_col[static_cast<std::size_t>(j)] = n_solver++;
  }

  double objective_shift = 0.0;
  Eigen::VectorXd b_ub = problem.b_ub;
  Eigen::VectorXd b_eq = problem.b_eq;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lb = problem.lower[j];
    if (std::isinf(lb)) continue;
    if (m_ub > 0) b_ub -= problem.A_ub.col(j) * lb;
    if (m_eq > 0) b_eq -= problem.A_eq.col(j) * lb;
    objective_shift += problem.c[j] * lb;
  }

  const Eigen::Index m = m_ub + m_eq;
  const Eigen::Index n_total = n_solver + m_ub;  // structural + slack
  StandardForm form;
  form.A = Eigen::MatrixXd::Zero(m, n_total);
  form.b = Eigen::VectorXd::Zero(m);
  form.c = Eigen::VectorXd::Zero(n_total);
  form.n_structural = n_total;

  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index p = pos_col[static_cast<std::size_t>(j)];
    if (m_ub > 0) form.A.col(p).head(m_ub) = problem.A_ub.col(j);
    if (m_eq > 0) form.A.col(p).tail(m_eq) = problem.A_eq.col(j);
    form.c[p] = problem.c[j];
    const Eigen::Index q = neg_col[static_cast<std::size_t>(j)];
    if (q >= 0) {
      form.A.col(q) = -form.A.col(p);
      form.c[q] = -problem.c[j];
    }
  }
  for (Eigen::Index i = 0; i < m_ub; ++i) form.A(i, n_solver + i) = 1.0;
  form.b.head(m_ub) = b_ub;
  form.b.tail(m_eq) = b_eq;

  // normalize to b >= 0
  for (Eigen::Index i = 0; i < m; ++i) {
    if (form.b[i] < 0.0) {
      form.A.row(i) = -form.A.row(i);
      form.b[i] = -form.b[i];
    }
  }

  // phase 1: artificials wherever the slack cannot start basic
  std::vector<Eigen::Index> basis;
  std::vector<Eigen::Index> artificial_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (i < m_ub && form.A(i, n_solver + i) == 1.0) {
      basis.push_back(n_solver + i);
    } else {
      artificial_rows.push_back(i);
      basis.push_back(-1);  // placeholder
    }
  }
  const Eigen::Index n_with_artificials =
      n_total + static_cast<Eigen::Index>(artificial_rows.size());
  form.A.conservativeResize(Eigen::NoChange, n_with_artificials);
  form.A.rightCols(n_with_artificials - n_total).setZero();
  form.c.conservativeResize(n_with_artificials);
  Eigen::VectorXd phase1_costs = Eigen::VectorXd::Zero(n_with_artificials);
  for (std::size_t k = 0; k < artificial_rows.size(); ++k) {
    const Eigen::Index col = n_total + static_cast<Eigen::Index>(k);
    form.A(artificial_rows[k], col) = 1.0;
    form.c[col] = 0.0;
    phase1_costs[col] = 1.0;
    basis[static_cast<std::size_t>(artificial_rows[k])] = col;
  }

  LpSolution solution;
  const Eigen::Index iteration_cap = 50 * (m + n_with_artificials) + 1000;

  RevisedSimplex simplex(form);
  simplex.set_basis(basis);

  if (!artificial_rows.empty()) {
    Eigen::Index used = 0;
    const LpStatus phase1 = simplex.iterate(phase1_costs, iteration_cap, used);
    solution.iterations += used;
    if (phase1 == LpStatus::iteration_limit) {
      solution.status = LpStatus::iteration_limit;
      return solution;
    }
    double infeasibility = 0.0;
    Eigen::VectorXd xb = simplex.basic_solution();
    for (Eigen::Index i = 0; i < simplex.rows(); ++i)
      if (simplex.basis()[static_cast<std::size_t>(i)] >= n_total)
        infeasibility += std::max(xb[i], 0.0);
    if (infeasibility > kFeasTol) {
      solution.status = LpStatus::infeasible;
      return solution;
    }
    simplex.purge_artificials();
  }

  Eigen::VectorXd phase2_costs = Eigen::VectorXd::Zero(n_with_artificials);
  phase2_costs.head(n_total) = form.c.head(n_total);
  // artificials stay priced out of phase 2
  for (Eigen::Index k = n_total; k < n_with_artificials; ++k) phase2_costs[k] = 1e30;

  Eigen::Index used = 0;
  const LpStatus phase2 = simplex.iterate(phase2_costs, iteration_cap, used);
  solution.iterations += used;
  solution.status = phase2;
  if (phase2 != LpStatus::optimal) return solution;

  Eigen::VectorXd z = simplex.full_solution();
  Eigen::VectorXd x(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double positive = z[pos_col[static_cast<std::size_t>(j)]];
    const double negative =
        neg_col[static_cast<std::size_t>(j)] >= 0 ? z[neg_col[static_cast<std::size_t>(j)]] : 0.0;
    const double shift = std::isinf(problem.lower[j]) ? 0.0 : problem.lower[j];
    x[j] = positive - negative + shift;
  }
  solution.x = std::move(x);
  solution.objective = problem.c.dot(solution.x);
  return solution;
}

}  // namespace empscen
