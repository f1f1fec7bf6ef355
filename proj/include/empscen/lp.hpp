#pragma once

#include <Eigen/Dense>
#include <string>

namespace empscen {

/// Standard-form container:
///   minimize c^T x
///   subject to A_ub x <= b_ub, A_eq x = b_eq, x_j >= lower_j
/// with lower_j = -inf marking a free variable.
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd lower;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::Index iterations = 0;
};

/// Dense two-phase revised simplex with Bland's anti-cycling rule. Free
/// variables are split, finite lower bounds shifted out; the basis inverse
/// is maintained explicitly with periodic refactorization.
LpSolution solve_lp(const LpProblem& problem);

}  // namespace empscen
