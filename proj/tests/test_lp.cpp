#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "empscen/lp.hpp"
#include "empscen/rng.hpp"

using namespace empscen;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LpProblem empty_problem(Eigen::Index n) {
  LpProblem p;
  p.c = Eigen::VectorXd::Zero(n);
  p.A_ub = Eigen::MatrixXd(0, n);
  p.b_ub = Eigen::VectorXd(0);
  p.A_eq = Eigen::MatrixXd(0, n);
  p.b_eq = Eigen::VectorXd(0);
  p.lower = Eigen::VectorXd::Zero(n);
  return p;
}

}  // namespace

TEST_CASE("toy maximization: min -x s.t. x <= 1") {
  LpProblem p = empty_problem(1);
  p.c[0] = -1.0;
  p.A_ub = Eigen::MatrixXd::Ones(1, 1);
  p.b_ub = Eigen::VectorXd::Ones(1);
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.objective == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("degenerate equality system with a unique point") {
  LpProblem p = empty_problem(2);
  p.c << 1.0, 1.0;
  p.A_eq = Eigen::MatrixXd(2, 2);
  p.A_eq << 1.0, 0.0, 1.0, 1.0;
  p.b_eq = Eigen::VectorXd(2);
  p.b_eq << 0.25, 1.0;
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x[0] == doctest::Approx(0.25));
  CHECK(s.x[1] == doctest::Approx(0.75));
}

TEST_CASE("infeasible and unbounded statuses") {
  SUBCASE("x >= 0 with x <= -1 is infeasible") {
    LpProblem p = empty_problem(1);
    p.c[0] = 1.0;
    p.A_ub = Eigen::MatrixXd::Ones(1, 1);
    p.b_ub = -Eigen::VectorXd::Ones(1);
    CHECK(solve_lp(p).status == LpStatus::infeasible);
  }
  SUBCASE("min -x with x free below is unbounded") {
    LpProblem p = empty_problem(1);
    p.c[0] = 1.0;
    p.lower[0] = -kInf;
    CHECK(solve_lp(p).status == LpStatus::unbounded);
  }
}

TEST_CASE("free variables via splitting") {
  // min t s.t. t >= x - 1, t >= 1 - x, x in [0, 1] fixed by equality x = 0.3
  LpProblem p = empty_problem(2);
  p.c << 0.0, 1.0;
  p.lower[1] = -kInf;
  p.A_ub = Eigen::MatrixXd(2, 2);
  p.A_ub << 1.0, -1.0,   // x - t <= 1
            -1.0, -1.0;  // -x - t <= -1
  p.b_ub = Eigen::VectorXd(2);
  p.b_ub << 1.0, -1.0;
  p.A_eq = Eigen::MatrixXd(1, 2);
  p.A_eq << 1.0, 0.0;
  p.b_eq = Eigen::VectorXd(1);
  p.b_eq << 0.3;
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x[1] == doctest::Approx(0.7).epsilon(1e-9));  // |x - 1|
}

TEST_CASE("redundant equality rows are tolerated") {
  LpProblem p = empty_problem(2);
  p.c << 1.0, 2.0;
  p.A_eq = Eigen::MatrixXd(2, 2);
  p.A_eq << 1.0, 1.0, 2.0, 2.0;  // duplicated constraint
  p.b_eq = Eigen::VectorXd(2);
  p.b_eq << 1.0, 2.0;
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == doctest::Approx(1.0));  // all weight on x_0
}

TEST_CASE("random LPs match the vertex-enumeration oracle") {
  Rng rng(2027);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(7));  // <= 8
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.uniform_index(4));
    LpProblem p = empty_problem(n);
    for (Eigen::Index j = 0; j < n; ++j) p.c[j] = rng.normal();
    p.A_ub = Eigen::MatrixXd(m + 1, n);
    p.b_ub = Eigen::VectorXd(m + 1);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j) p.A_ub(i, j) = rng.normal();
    // feasible by construction at a random nonnegative point
    Eigen::VectorXd x0(n);
    for (Eigen::Index j = 0; j < n; ++j) x0[j] = rng.uniform01();
    for (Eigen::Index i = 0; i < m; ++i)
      p.b_ub[i] = p.A_ub.row(i).head(n).dot(x0) + 0.1 + rng.uniform01();
    // bounded by a simplex-style cap
    p.A_ub.row(m).setOnes();
    p.b_ub[m] = static_cast<double>(n) + 1.0;

    LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::optimal);
    const double oracle = oracles::vertex_enumeration_optimum(p);
    CHECK(s.objective == doctest::Approx(oracle).epsilon(1e-8));

    // primal feasibility of the reported solution
    for (Eigen::Index i = 0; i < p.A_ub.rows(); ++i)
      CHECK(p.A_ub.row(i).dot(s.x) <= p.b_ub[i] + 1e-8);
    CHECK(s.x.minCoeff() >= -1e-9);
    ++solved;
  }
  CHECK(solved == 200);
}
