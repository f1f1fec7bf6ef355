#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "empscen/factorization.hpp"
#include "empscen/moments.hpp"
#include "empscen/scenario_set.hpp"
#include "empscen/weights.hpp"

namespace empscen {

/// Column-echelon form of the pivoted Cholesky factor: rows at the pivot
/// positions form the identity exactly after reduction.
struct EchelonFactor {
  Eigen::MatrixXd L_tilde;                // m x r
  std::vector<Eigen::Index> pivot_rows;   // basis positions of the leading block
};

EchelonFactor echelon_reduce(const Eigen::MatrixXd& L, const std::vector<Eigen::Index>& pivots);

/// N_i holds the rows of L_tilde at the indices a_j + e_i; the scenarios are
/// the joint eigenvalues of these multiplication operators.
struct MultiplicationMatrices {
  std::vector<Eigen::MatrixXd> N;  // d matrices, each r x r
};

MultiplicationMatrices multiplication_matrices(const EchelonFactor& echelon,
                                               const MonomialBasis& basis);

/// Moment-matrix extraction via block-restricted pivoted Cholesky, echelon
/// reduction, a seeded random convex combination of the multiplication
/// matrices and its real Schur decomposition. M_flat must carry one degree
/// more than q and admit an atomic representation of rank r (r = 0 infers
/// the rank); otherwise the factorization or the eigenvalue check fails
/// loudly. Weights are recovered by the simplex-constrained least-squares
/// fit against the first moment column.
ScenarioSet lasserre_extract(const MomentMatrix& M_flat, int q, Eigen::Index r,
                             std::uint64_t seed, const AdmmConfig& admm = {});

/// Convenience wrapper for empirical panels: builds the degree-(q+1) moment
/// matrix of the affinely normalized panel, extracts, and maps the atoms
/// back to original coordinates. The panel must be supported on few enough
/// distinct points to admit the flat structure; otherwise this fails loudly
/// like lasserre_extract.
ScenarioSet lasserre_from_panel(const SamplePanel& panel, int q, std::uint64_t seed,
                                const AdmmConfig& admm = {});

}  // namespace empscen
