#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "empscen/errors.hpp"
#include "empscen/factorization.hpp"
#include "empscen/rng.hpp"

using namespace empscen;

TEST_CASE("identity factors as a unit-pivot sweep") {
  CholeskyFactors f = pivoted_cholesky(Eigen::MatrixXd::Identity(3, 3), {});
  REQUIRE(f.rank() == 3);
  CHECK(f.pivots == std::vector<Eigen::Index>{0, 1, 2});  // ties break low
  CHECK((f.L - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
  CHECK((f.B - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
  CHECK(f.residual_trace == 0.0);
}

TEST_CASE("rank-1 example by hand: M = [[4,2],[2,1]]") {
  Eigen::MatrixXd M(2, 2);
  M << 4, 2, 2, 1;
  PivotedCholeskyOptions opts;
  opts.tolerance = 1e-12;
  CholeskyFactors f = pivoted_cholesky(M, opts);
  REQUIRE(f.rank() == 1);
  CHECK(f.pivots == std::vector<Eigen::Index>{0});
  CHECK(f.L(0, 0) == doctest::Approx(2.0));
  CHECK(f.L(1, 0) == doctest::Approx(1.0));
  CHECK(f.B(0, 0) == doctest::Approx(0.5));
  CHECK(f.B(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("two-atom moment matrix has rank 2") {
  Eigen::MatrixXd data(2, 1);
  data << 0.0, 1.0;
  auto M = moment_matrix(SamplePanel{data}, 2);
  CholeskyFactors f = pivoted_cholesky(M, 1e-12);
  CHECK(f.rank() == 2);
}

TEST_CASE("not-PSD input is rejected") {
  Eigen::MatrixXd M(2, 2);
  M << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
  CHECK_THROWS_AS(pivoted_cholesky(M, {}), NotPsdError);
}

TEST_CASE("factorization invariants on random PSD matrices") {
  Rng rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index m = 4 + static_cast<Eigen::Index>(rng.uniform_index(8));
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng.uniform_index(m));
    Eigen::MatrixXd X = oracles::random_panel(m, rank, rng);
    Eigen::MatrixXd M = X * X.transpose();

    CholeskyFactors f = pivoted_cholesky(M, {});

    CHECK((f.B.transpose() * f.L - Eigen::MatrixXd::Identity(f.rank(), f.rank()))
              .lpNorm<Eigen::Infinity>() <= 1e-10);
    // err history never increases
    for (std::size_t k = 1; k < f.residual_history.size(); ++k)
      CHECK(f.residual_history[k] <= f.residual_history[k - 1] + 1e-12);
    // trace residual bounds the Frobenius reconstruction error for PSD
    CHECK((M - f.L * f.L.transpose()).norm() <=
          std::sqrt(static_cast<double>(m)) * (f.residual_trace + 1e-9));
    // distinct pivots
    std::vector<Eigen::Index> sorted = f.pivots;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }
}

TEST_CASE("reconstruction meets a requested tolerance") {
  Rng rng(59);
  Eigen::MatrixXd X = oracles::random_panel(8, 8, rng);
  Eigen::MatrixXd M = X * X.transpose();
  PivotedCholeskyOptions opts;
  opts.tolerance = 1e-6;
  CholeskyFactors f = pivoted_cholesky(M, opts);
  CHECK(f.residual_trace <= 1e-6);
  CHECK((M - f.L * f.L.transpose()).norm() <= std::sqrt(8.0) * 1e-6);
}

TEST_CASE("B B^T acts as the Moore-Penrose inverse of M") {
  Rng rng(211);
  SUBCASE("full-rank instances: B B^T equals the inverse") {
    for (int trial = 0; trial < 6; ++trial) {
      Eigen::MatrixXd X = oracles::random_panel(5, 5, rng);
      Eigen::MatrixXd M = X * X.transpose();
      CholeskyFactors f = pivoted_cholesky(M, {});
      REQUIRE(f.rank() == 5);
      CHECK((f.B * f.B.transpose() - oracles::pseudo_inverse(M)).lpNorm<Eigen::Infinity>() <=
            1e-8 * oracles::pseudo_inverse(M).lpNorm<Eigen::Infinity>());
    }
  }
  SUBCASE("rank-deficient 5x5 instances: equality on the column space") {
    // B vanishes off the pivot rows, so B B^T and M^+ agree only after
    // projecting onto Im M; that projected identity is what the kernel
    // construction V B B^T V^T uses.
    for (int trial = 0; trial < 6; ++trial) {
      Eigen::MatrixXd X = oracles::random_panel(5, 3, rng);
      Eigen::MatrixXd M = X * X.transpose();  // 5x5, rank 3
      CholeskyFactors f = pivoted_cholesky(M, {});
      REQUIRE(f.rank() == 3);
      Eigen::MatrixXd pinv = oracles::pseudo_inverse(M);
      Eigen::MatrixXd projector = pinv * M;  // orthogonal projector onto Im M
      Eigen::MatrixXd bbt = f.B * f.B.transpose();
      const double scale = pinv.lpNorm<Eigen::Infinity>();
      CHECK((projector * bbt * projector - pinv).lpNorm<Eigen::Infinity>() <= 1e-8 * scale);
      // the reconstruction identity behind it
      CHECK((M * bbt * M - M).lpNorm<Eigen::Infinity>() <= 1e-10 * M.lpNorm<Eigen::Infinity>());
      // and the operational form: X^T spans Im M, so X B B^T X^T = X M^+ X^T
      CHECK((X.transpose() * bbt * X - X.transpose() * pinv * X).lpNorm<Eigen::Infinity>() <=
            1e-8 * scale * X.squaredNorm());
    }
  }
}

TEST_CASE("block-restricted pivoting") {
  SUBCASE("atoms {0,1} with equal mass: hand-computed factor") {
    Eigen::MatrixXd data(2, 1);
    data << 0.0, 1.0;
    auto M = moment_matrix(SamplePanel{data}, 2);  // 3x3 flat extension of degree 1
    CholeskyFactors f = pivoted_cholesky_flat(M, 1e-10, 2);
    REQUIRE(f.rank() == 2);
    CHECK(f.pivots == std::vector<Eigen::Index>{0, 1});
    Eigen::MatrixXd expected(3, 2);
    expected << 1.0, 0.0,
                0.5, 0.5,
                0.5, 0.5;
    CHECK((f.L - expected).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
  SUBCASE("identity with a full block behaves like the plain variant") {
    MomentMatrix M{Eigen::MatrixXd::Identity(2, 2), 1, MonomialBasis(1, 1)};
    CholeskyFactors f = pivoted_cholesky_flat(M, 0.0, 2);
    CHECK(f.rank() == 2);
  }
  SUBCASE("rank-1 Vandermonde outer product takes one pivot") {
    const double mu = 0.5;
    Eigen::VectorXd tau(3);
    tau << 1.0, mu, mu * mu;
    MomentMatrix M{tau * tau.transpose(), 2, MonomialBasis(1, 2)};
    CholeskyFactors f = pivoted_cholesky_flat(M, 1e-12, 2);
    REQUIRE(f.rank() == 1);
    CHECK(f.pivots == std::vector<Eigen::Index>{0});
  }
  SUBCASE("non-flat input fails loudly") {
    // three distinct atoms: the degree-2 matrix has rank 3, but only the
    // first two pivots are admissible
    Eigen::MatrixXd data(3, 1);
    data << -1.0, 0.3, 1.0;
    auto M = moment_matrix(SamplePanel{data}, 2);
    CHECK_THROWS_AS(pivoted_cholesky_flat(M, 1e-10, 2), FlatnessViolationError);
  }
}

TEST_CASE("orthonormal embedding") {
  SUBCASE("panel {-1,+1} at q = 1") {
    Eigen::MatrixXd data(2, 1);
    data << -1.0, 1.0;
    SamplePanel panel{data};
    EmbeddingBundle bundle = build_embedding(panel, 2);
    REQUIRE(bundle.embedding.rank() == 2);
    CHECK((bundle.embedding.Q.transpose() * bundle.embedding.Q -
           Eigen::MatrixXd::Identity(2, 2))
              .lpNorm<Eigen::Infinity>() <= 1e-12);
    Eigen::VectorXd h = bundle.embedding.Q * bundle.embedding.y_tilde;
    CHECK(h[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(h[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("single sample: Q is the 1x1 identity") {
    Eigen::MatrixXd data(1, 2);
    data << 3.0, -2.0;
    EmbeddingBundle bundle = build_embedding(SamplePanel{data}, 2);
    REQUIRE(bundle.embedding.rank() == 1);
    CHECK(std::abs(std::abs(bundle.embedding.Q(0, 0)) - 1.0) <= 1e-12);
    CHECK((bundle.embedding.Q * bundle.embedding.y_tilde)(0) == doctest::Approx(1.0));
  }
  SUBCASE("random panels: orthonormality and the averaging identity") {
    Rng rng(307);
    for (int trial = 0; trial < 8; ++trial) {
      const Eigen::Index n = 20 + static_cast<Eigen::Index>(rng.uniform_index(180));
      const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.uniform_index(4));
      const int q = 1 + static_cast<int>(rng.uniform_index(2));
      SamplePanel panel{oracles::random_panel(n, d, rng)};
      EmbeddingBundle bundle = build_embedding(panel, 2 * q);
      const Eigen::Index r = bundle.embedding.rank();
      CHECK((bundle.embedding.Q.transpose() * bundle.embedding.Q -
             Eigen::MatrixXd::Identity(r, r))
                .lpNorm<Eigen::Infinity>() <= 1e-8);
      Eigen::VectorXd h = bundle.embedding.Q * bundle.embedding.y_tilde;
      CHECK((h.array() - 1.0 / static_cast<double>(n)).abs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("dimension mismatch is rejected") {
    Eigen::MatrixXd data(4, 1);
    data << 0.0, 1.0, 2.0, 3.0;
    SamplePanel panel{data};
    auto V = vandermonde(panel, 2);
    auto y = empirical_moments(panel, 2);
    auto M = moment_matrix(panel, 1);  // wrong degree: 2x2 factors
    CholeskyFactors f = pivoted_cholesky(M, 0.0);
    CHECK_THROWS_AS(orthonormal_embed(V, f, y), InvalidInputError);
  }
}

TEST_CASE("rank-capped factorization keeps exact biorthogonality") {
  Rng rng(401);
  SamplePanel panel{oracles::random_panel(50, 3, rng)};
  EmbeddingBundle bundle = build_embedding(panel, 4, 5);
  CHECK(bundle.factors.rank() == 5);
  CHECK(bundle.factors.rank_capped);
  CHECK((bundle.embedding.Q.transpose() * bundle.embedding.Q -
         Eigen::MatrixXd::Identity(5, 5))
            .lpNorm<Eigen::Infinity>() <= 1e-8);
}
