#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "empscen/errors.hpp"
#include "empscen/rng.hpp"
#include "empscen/weights.hpp"

using namespace empscen;

TEST_CASE("simplex projection") {
  SUBCASE("feasible points are fixed") {
    Eigen::VectorXd v(2);
    v << 0.5, 0.5;
    CHECK((project_simplex(v) - v).norm() == 0.0);
  }
  SUBCASE("sort-and-threshold by hand: (2,0) -> (1,0)") {
    Eigen::VectorXd v(2);
    v << 2.0, 0.0;
    Eigen::VectorXd w = project_simplex(v);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(0.0));
  }
  SUBCASE("symmetry forces uniform: (0,0) -> (0.5,0.5)") {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd w = project_simplex(v);
    CHECK(w[0] == doctest::Approx(0.5));
    CHECK(w[1] == doctest::Approx(0.5));
  }
  SUBCASE("idempotent and 1-Lipschitz on random pairs") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng.uniform_index(8));
      Eigen::VectorXd a(r), b(r);
      for (Eigen::Index i = 0; i < r; ++i) {
        a[i] = 4.0 * rng.normal();
        b[i] = 4.0 * rng.normal();
      }
      Eigen::VectorXd pa = project_simplex(a);
      Eigen::VectorXd pb = project_simplex(b);
      CHECK((project_simplex(pa) - pa).lpNorm<Eigen::Infinity>() <= 1e-12);
      CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);
      CHECK(pa.minCoeff() >= 0.0);
      CHECK(pa.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

namespace {

Eigen::MatrixXd vandermonde_rows_1d(std::initializer_list<double> points, int degree) {
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(points.size()), 1);
  Eigen::Index i = 0;
  for (double p : points) pts(i++, 0) = p;
  return vandermonde(pts, degree).values;
}

}  // namespace

TEST_CASE("admm weight retrieval") {
  SUBCASE("single scenario gets weight one") {
    Eigen::MatrixXd V = vandermonde_rows_1d({2.0}, 2);
    Eigen::VectorXd y(3);
    y << 1.0, 2.0, 4.0;
    AdmmResult res = admm_weights(V, y);
    REQUIRE(res.weights.size() == 1);
    CHECK(res.weights[0] == 1.0);
    CHECK(res.converged);
  }
  SUBCASE("two symmetric scenarios split evenly") {
    Eigen::MatrixXd V = vandermonde_rows_1d({-1.0, 1.0}, 2);
    Eigen::VectorXd y(3);
    y << 1.0, 0.0, 1.0;
    AdmmResult res = admm_weights(V, y);
    CHECK(res.converged);
    CHECK(res.weights[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(res.weights[1] == doctest::Approx(0.5).epsilon(1e-8));
  }
  SUBCASE("redundant middle point receives zero weight") {
    Eigen::MatrixXd V = vandermonde_rows_1d({-1.0, 0.0, 1.0}, 2);
    Eigen::VectorXd y(3);
    y << 1.0, 0.0, 1.0;
    AdmmResult res = admm_weights(V, y);
    CHECK(res.converged);
    CHECK(res.weights[0] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(res.weights[1] == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(res.weights[2] == doctest::Approx(0.5).epsilon(1e-7));
  }
}

TEST_CASE("admm output is always feasible and no worse than the uniform start") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index r = 2 + static_cast<Eigen::Index>(rng.uniform_index(6));
    const Eigen::Index m = 3 + static_cast<Eigen::Index>(rng.uniform_index(8));
    Eigen::MatrixXd V = oracles::random_panel(r, m, rng, 2.0);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) y[i] = rng.normal();

    AdmmResult res = admm_weights(V, y);
    CHECK(res.weights.minCoeff() >= -1e-12);
    CHECK(std::abs(res.weights.sum() - 1.0) <= 1e-10);

    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(r, 1.0 / static_cast<double>(r));
    CHECK(moment_fit_residual(V, y, res.weights) <=
          moment_fit_residual(V, y, uniform) + 1e-12);
  }
}

TEST_CASE("admm objective matches brute-force grid search on r <= 3") {
  Rng rng(47);
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng.uniform_index(3));
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.uniform_index(5));
    Eigen::MatrixXd V = oracles::random_panel(r, m, rng, 1.5);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) y[i] = rng.normal();

    AdmmResult res = admm_weights(V, y);
    const double admm_objective = moment_fit_residual(V, y, res.weights);
    const double grid_objective = oracles::grid_search_objective(V.transpose(), y, 1e-3);
    CHECK(admm_objective <= grid_objective + 1e-3);
    CHECK(admm_objective >= grid_objective - 1e-3);
  }
}

TEST_CASE("admm flags non-convergence instead of failing") {
  Eigen::MatrixXd V = vandermonde_rows_1d({-1.0, -0.5, 0.5, 1.0}, 2);
  Eigen::VectorXd y(3);
  y << 1.0, 0.3, 0.9;
  AdmmConfig config;
  config.max_iter = 3;
  AdmmResult res = admm_weights(V, y, config);
  CHECK_FALSE(res.converged);
  CHECK(res.weights.minCoeff() >= -1e-12);
  CHECK(std::abs(res.weights.sum() - 1.0) <= 1e-10);
}

TEST_CASE("admm input validation") {
  Eigen::MatrixXd V = vandermonde_rows_1d({1.0}, 1);
  Eigen::VectorXd y(3);
  y << 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(admm_weights(V, y), InvalidInputError);  // basis mismatch
  AdmmConfig bad;
  bad.rho = -1.0;
  Eigen::VectorXd y2(2);
  y2 << 1.0, 1.0;
  Eigen::MatrixXd V2 = vandermonde_rows_1d({1.0, 2.0}, 1);
  CHECK_THROWS_AS(admm_weights(V2, y2, bad), InvalidInputError);
}
