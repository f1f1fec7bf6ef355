#pragma once

#include <Eigen/Dense>

#include "empscen/multi_index.hpp"
#include "empscen/sample_panel.hpp"

namespace empscen {

/// Row i holds the monomial basis evaluated at observation i; the first
/// column is the constant monomial and therefore all ones.
struct VandermondeMatrix {
  Eigen::MatrixXd values;  // N x m_degree
  int degree = 0;
  MonomialBasis basis;
};

/// Moments y_a of the empirical measure for |a| <= degree; y_0 = 1.
struct MomentSequence {
  Eigen::VectorXd values;
  int degree = 0;
  MonomialBasis basis;
};

/// Symmetric PSD Gramian [y_{a+b}] over the basis of total degree <= degree.
struct MomentMatrix {
  Eigen::MatrixXd values;  // m x m
  int degree = 0;
  MonomialBasis basis;
};

VandermondeMatrix vandermonde(const Eigen::MatrixXd& points, int degree);
inline VandermondeMatrix vandermonde(const SamplePanel& panel, int degree) {
  return vandermonde(panel.data, degree);
}

/// (1/N) V^T 1 over the degree <= two_q basis.
MomentSequence empirical_moments(const SamplePanel& panel, int two_q);

/// (1/N) V^T V with V of the given degree. Accumulation switches to chunked
/// pairwise summation for N >= 10^5 where moment entries span many orders of
/// magnitude.
MomentMatrix moment_matrix(const SamplePanel& panel, int degree);

/// || M - V^T diag(w) V ||_F / || M ||_F.
double relative_error(const MomentMatrix& M, const VandermondeMatrix& V,
                      const Eigen::VectorXd& weights);

/// Checks symmetry, eigenvalue floor, and the Hankel entry structure; throws
/// on violation. Diagnostic helper, not called on construction.
void validate(const MomentMatrix& M);

namespace detail {
/// (1/N) V^T V, chunked pairwise for large N.
Eigen::MatrixXd gram_normalized(const Eigen::MatrixXd& V);
/// (1/N) V^T 1, chunked pairwise for large N.
Eigen::VectorXd column_means(const Eigen::MatrixXd& V);
}  // namespace detail

}  // namespace empscen
