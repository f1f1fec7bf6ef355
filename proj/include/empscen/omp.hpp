#pragma once

#include <Eigen/Dense>
#include <vector>

#include "empscen/factorization.hpp"
#include "empscen/sample_panel.hpp"
#include "empscen/scenario_set.hpp"
#include "empscen/weights.hpp"

namespace empscen {

struct OmpSelection {
  std::vector<Eigen::Index> indices;
  OmpTrace trace;
  CholeskyFactors factors;  // of the kernel K = N Q Q^T
};

/// Matching pursuit on the kernel K = N Q Q^T, never materialized: columns
/// are formed as N Q (Q^T e_j). Each step selects the largest entry of the
/// residual h (lowest index on ties -- the first step is a full tie because
/// h = (1/N) 1), eliminates it with a pivoted-Cholesky column and stops when
/// the relative residual drops below the tolerance, max_iter is reached, or
/// the kernel rank is exhausted.
OmpSelection omp_select(const OrthonormalEmbedding& embedding, double tolerance,
                        Eigen::Index max_iter);

struct ExtractOptions {
  int q = 1;
  double tolerance = 1e-8;       // relative residual target for the selection
  Eigen::Index max_iter = 0;     // 0 = dim P_{2q}, the rank bound
  Eigen::Index embed_max_rank = 0;  // 0 = exhaust the Gram rank
  /// Run the moment computations on the affinely normalized panel. The
  /// kernel depends only on the column span of the Vandermonde matrix, so
  /// the selection is unchanged in exact arithmetic; the weight fit gains
  /// many orders of magnitude in conditioning. Scenario points are always
  /// reported in original coordinates.
  bool standardize = true;
  AdmmConfig admm;
};

struct ExtractResult {
  ScenarioSet scenarios;
  OmpTrace trace;
  AdmmResult weights;
};

/// Two-stage pipeline: empirical moments -> Gram factorization ->
/// orthonormal embedding -> greedy selection -> simplex weights.
ExtractResult extract_scenarios(const SamplePanel& panel, const ExtractOptions& options);

/// Same pipeline with the selection stage swapped out: omp, maxvol (greedy
/// maximum volume over the embedding rows) or ghtp. The trace is populated
/// for omp only.
ExtractResult extract_with(const SamplePanel& panel, ScenarioSource algorithm,
                           const ExtractOptions& options);

}  // namespace empscen
