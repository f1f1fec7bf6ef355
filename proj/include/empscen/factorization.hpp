#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "empscen/moments.hpp"

namespace empscen {

/// Low-rank factor M ~= L L^T together with the biorthogonal basis B
/// satisfying B^T L = I_r. B is supported on the pivot rows only.
struct CholeskyFactors {
  Eigen::MatrixXd L;  // m x r
  Eigen::MatrixXd B;  // m x r
  std::vector<Eigen::Index> pivots;
  double residual_trace = 0.0;           // ||d||_1 at exit
  std::vector<double> residual_history;  // ||d||_1 after each pivot
  bool exhausted_early = false;  // zero pivot hit while err > tolerance
  bool rank_capped = false;      // stopped by an explicit rank cap

  Eigen::Index rank() const { return L.cols(); }
};

struct PivotedCholeskyOptions {
  double tolerance = 0.0;        // absolute threshold on ||d||_1
  Eigen::Index max_rank = 0;     // 0 = unbounded
  Eigen::Index pivot_block = 0;  // restrict pivots to indices < pivot_block; 0 = all
};

/// Greedy largest-diagonal pivoting; err = ||d||_1 decreases monotonically
/// and the loop stops once err <= tolerance or the diagonal is exhausted.
/// Pivot ties break to the lowest index.
CholeskyFactors pivoted_cholesky(const Eigen::MatrixXd& M, const PivotedCholeskyOptions& opts);
CholeskyFactors pivoted_cholesky(const MomentMatrix& M, double tolerance);

/// Variant with pivots restricted to the leading block, as required for
/// extraction from flat moment matrices. Throws FlatnessViolationError when
/// the block pivots cannot reduce the residual below the tolerance.
CholeskyFactors pivoted_cholesky_flat(const MomentMatrix& M, double tolerance,
                                      Eigen::Index block);

/// Driver shared by the dense and matrix-free paths. `column(j, out)` must
/// write M e_j into `out`.
CholeskyFactors pivoted_cholesky_impl(
    Eigen::VectorXd diag, const std::function<void(Eigen::Index, Eigen::VectorXd&)>& column,
    const PivotedCholeskyOptions& opts, bool flat_block_semantics);

/// L^2-orthonormal embedding Q = (1/sqrt(N)) V B with y_tilde = (1/sqrt(N)) B^T y_hat.
/// When the factorization exhausts the rank of M = (1/N) V^T V, Q has
/// orthonormal columns and Q y_tilde = (1/N) 1.
struct OrthonormalEmbedding {
  Eigen::MatrixXd Q;        // N x r
  Eigen::VectorXd y_tilde;  // r

  Eigen::Index rank() const { return Q.cols(); }
};

OrthonormalEmbedding orthonormal_embed(const VandermondeMatrix& V,
                                       const CholeskyFactors& factors,
                                       const MomentSequence& y_hat);

/// Pipeline bundle: Vandermonde of degree 2q, empirical moments, Gram
/// factorization and the resulting embedding. The Gramian (1/N) V^T V is
/// materialized only while it stays small; otherwise its columns are formed
/// on demand from V.
struct EmbeddingBundle {
  VandermondeMatrix V;
  MomentSequence y_hat;
  CholeskyFactors factors;
  OrthonormalEmbedding embedding;
};

EmbeddingBundle build_embedding(const SamplePanel& panel, int two_q,
                                Eigen::Index max_rank = 0);

}  // namespace empscen
