#include "empscen/lasserre.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "empscen/errors.hpp"
#include "empscen/rng.hpp"

namespace empscen {

EchelonFactor echelon_reduce(const Eigen::MatrixXd& L, const std::vector<Eigen::Index>& pivots) {
  const Eigen::Index r = L.cols();
  if (static_cast<Eigen::Index>(pivots.size()) != r)
    throw InvalidInputError("echelon_reduce: pivot count does not match factor rank");

  // L restricted to the pivot rows is lower triangular in selection order
  // with positive diagonal, hence invertible.
  Eigen::MatrixXd block(r, r);
  for (Eigen::Index i = 0; i < r; ++i) block.row(i) = L.row(pivots[static_cast<std::size_t>(i)]);

  EchelonFactor out;
  // solves X * block = L; rows of L at earlier pivots vanish in later
  // columns, so only the lower triangle of the block carries information
  out.L_tilde = block.triangularView<Eigen::Lower>().solve<Eigen::OnTheRight>(L);
  out.pivot_rows = pivots;
  // pin the leading block to the exact identity
  for (Eigen::Index i = 0; i < r; ++i) {
    out.L_tilde.row(pivots[static_cast<std::size_t>(i)]).setZero();
    out.L_tilde(pivots[static_cast<std::size_t>(i)], i) = 1.0;
  }
  return out;
}

MultiplicationMatrices multiplication_matrices(const EchelonFactor& echelon,
                                               const MonomialBasis& basis) {
  const Eigen::Index r = echelon.L_tilde.cols();
  const int d = basis.dim();
  MultiplicationMatrices out;
  out.N.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    Eigen::MatrixXd Ni(r, r);
    for (Eigen::Index j = 0; j < r; ++j) {
      MultiIndex shifted = basis[static_cast<std::size_t>(echelon.pivot_rows[static_cast<std::size_t>(j)])];
      shifted.exponents[static_cast<std::size_t>(i)] += 1;
      const std::ptrdiff_t pos = basis.index_of(shifted);
      if (pos < 0)
        throw InvalidInputError("multiplication_matrices: pivot monomial leaves the basis");
      Ni.row(j) = echelon.L_tilde.row(pos);
    }
    out.N.push_back(std::move(Ni));
  }
  return out;
}

ScenarioSet lasserre_extract(const MomentMatrix& M_flat, int q, Eigen::Index r,
                             std::uint64_t seed, const AdmmConfig& admm) {
  const int d = M_flat.basis.dim();
  const int flat_degree = M_flat.degree;
  if (flat_degree < q + 1)
    throw InvalidInputError("lasserre_extract: moment matrix must extend the degree by >= 1");

  const auto block = static_cast<Eigen::Index>(basis_size(d, flat_degree - 1));
  const double scale = std::max(M_flat.values.trace(), 1.0);
  CholeskyFactors factors = pivoted_cholesky_flat(M_flat, 1e-10 * scale, block);
  if (r > 0 && factors.rank() != r)
    throw ExtractionFailureError("lasserre_extract: factor rank " +
                                 std::to_string(factors.rank()) +
                                 " does not match the stated rank " + std::to_string(r));
  const Eigen::Index rank = factors.rank();

  EchelonFactor echelon = echelon_reduce(factors.L, factors.pivots);
  MultiplicationMatrices mult = multiplication_matrices(echelon, M_flat.basis);

  // random convex combination of the multiplication operators
  Rng rng = Rng(seed).split("lasserre-rho");
  Eigen::VectorXd rho(d);
  for (int i = 0; i < d; ++i) rho[i] = rng.uniform01();
  rho /= rho.sum();
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(rank, rank);
  for (int i = 0; i < d; ++i) N += rho[i] * mult.N[static_cast<std::size_t>(i)];

  Eigen::RealSchur<Eigen::MatrixXd> schur(N);
  if (schur.info() != Eigen::Success)
    throw ExtractionFailureError("lasserre_extract: Schur decomposition did not converge");
  const Eigen::MatrixXd& T = schur.matrixT();
  const Eigen::MatrixXd& U = schur.matrixU();
  const double t_scale = std::max(1.0, T.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j + 1 < rank; ++j) {
    if (std::abs(T(j + 1, j)) > 1e-10 * t_scale) {
      // 2x2 block = complex conjugate eigenvalue pair
      const double imag_sq = -T(j + 1, j) * T(j, j + 1);
      const double imag = imag_sq > 0.0 ? std::sqrt(imag_sq) : std::abs(T(j + 1, j));
      if (imag > 1e-8 * t_scale)
        throw ExtractionFailureError(
            "lasserre_extract: complex joint eigenvalues (imaginary part " +
            std::to_string(imag) + "); the input is not a flat moment matrix");
    }
  }

  Eigen::MatrixXd points(rank, d);
  Eigen::VectorXd order_keys(rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    for (int i = 0; i < d; ++i)
      points(j, i) = U.col(j).dot(mult.N[static_cast<std::size_t>(i)] * U.col(j));
    order_keys[j] = T(j, j);
  }
  // deterministic scenario order: ascending combined eigenvalue
  std::vector<Eigen::Index> order(static_cast<std::size_t>(rank));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&order_keys](Eigen::Index a, Eigen::Index b) { return order_keys[a] < order_keys[b]; });
  Eigen::MatrixXd sorted(rank, d);
  for (Eigen::Index j = 0; j < rank; ++j) sorted.row(j) = points.row(order[static_cast<std::size_t>(j)]);

  // probabilities from the flat moment sequence = first moment column
  VandermondeMatrix V_ext = vandermonde(sorted, flat_degree);
  AdmmResult weights = admm_weights(V_ext.values, M_flat.values.col(0), admm);

  ScenarioSet out;
  out.points = std::move(sorted);
  out.weights = weights.weights;
  out.source = ScenarioSource::lasserre;
  return out;
}

ScenarioSet lasserre_from_panel(const SamplePanel& panel, int q, std::uint64_t seed,
                                const AdmmConfig& admm) {
  Standardization transform = fit_standardization(panel);
  SamplePanel working{transform.apply(panel.data)};
  MomentMatrix M_flat = moment_matrix(working, q + 1);
  ScenarioSet set = lasserre_extract(M_flat, q, 0, seed, admm);
  set.points = transform.invert(set.points);
  return set;
}

}  // namespace empscen
