#include "empscen/omp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "empscen/errors.hpp"
#include "empscen/ghtp.hpp"
#include "empscen/maxvol.hpp"
#include "empscen/multi_index.hpp"

namespace empscen {

OmpSelection omp_select(const OrthonormalEmbedding& embedding, double tolerance,
                        Eigen::Index max_iter) {
  if (tolerance <= 0.0) throw InvalidInputError("omp_select: tolerance must be positive");
  if (max_iter < 1) throw InvalidInputError("omp_select: max_iter must be >= 1");

  const Eigen::MatrixXd& Q = embedding.Q;
  const Eigen::Index n = Q.rows();
  const double n_d = static_cast<double>(n);

  // K = N Q Q^T applied implicitly
  Eigen::VectorXd d = n_d * Q.rowwise().squaredNorm();
  const double pivot_floor =
      static_cast<double>(n) * std::numeric_limits<double>::epsilon() * std::max(d.maxCoeff(), 1e-300);

  Eigen::VectorXd h = Q * embedding.y_tilde;
  const Eigen::VectorXd h0 = h;
  const double h_norm = h0.norm();
  if (h_norm == 0.0) throw DegenerateError("omp_select: zero right-hand side");

  OmpSelection out;
  const Eigen::Index cap = std::min(max_iter, n);
  Eigen::MatrixXd L(n, cap);
  Eigen::MatrixXd B(n, cap);
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  Eigen::Index r = 0;
  double err = 1.0;

  while (err > tolerance && r < cap) {
    // residual-driven pivot among columns whose Schur diagonal is alive;
    // near-ties (notably the all-tie first step, where h is constant by the
    // averaging identity) resolve to the lowest index
    Eigen::Index j = -1;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)] || d[i] <= pivot_floor) continue;
      const double magnitude = std::abs(h[i]);
      if (magnitude > best * (1.0 + 64.0 * std::numeric_limits<double>::epsilon())) {
        best = magnitude;
        j = i;
      }
    }
    if (j < 0) {
      // kernel rank exhausted
      if (err > std::max(tolerance, 1e-8))
        throw NumericalBreakdownError(
            "omp_select: zero pivot diagonal with relative residual " + std::to_string(err));
      break;
    }

    const double inv_sqrt = 1.0 / std::sqrt(d[j]);
    Eigen::VectorXd kcol = n_d * (Q * Q.row(j).transpose());
    Eigen::VectorXd lrow = L.leftCols(r).row(j).transpose();
    L.col(r) = (kcol - L.leftCols(r) * lrow) * inv_sqrt;
    B.col(r) = (-B.leftCols(r) * lrow) * inv_sqrt;
    B(j, r) += inv_sqrt;

    d -= L.col(r).cwiseAbs2();
    d[j] = 0.0;
    d = d.cwiseMax(0.0);
    h -= (B.col(r).dot(h0)) * L.col(r);

    taken[static_cast<std::size_t>(j)] = true;
    out.factors.pivots.push_back(j);
    out.trace.pivot_sequence.push_back(j);
    ++r;
    err = h.norm() / h_norm;
    out.trace.residual_norms.push_back(err);
  }

  out.trace.converged = (err <= tolerance);
  out.indices = out.factors.pivots;
  out.factors.L = L.leftCols(r);
  out.factors.B = B.leftCols(r);
  out.factors.residual_trace = d.sum();
  return out;
}

ExtractResult extract_with(const SamplePanel& panel, ScenarioSource algorithm,
                           const ExtractOptions& options) {
  if (options.q < 0) throw InvalidInputError("extract_scenarios: q must be >= 0");
  if (algorithm != ScenarioSource::omp && algorithm != ScenarioSource::maxvol &&
      algorithm != ScenarioSource::ghtp)
    throw InvalidInputError("extract_with: expected a subset-selection algorithm");

  const int two_q = 2 * options.q;
  SamplePanel working = panel;
  if (options.standardize)
    working.data = fit_standardization(panel).apply(panel.data);

  EmbeddingBundle bundle = build_embedding(working, two_q, options.embed_max_rank);

  Eigen::Index max_iter = options.max_iter;
  if (max_iter <= 0)
    max_iter = static_cast<Eigen::Index>(basis_size(static_cast<int>(panel.dim()), two_q));

  std::vector<Eigen::Index> indices;
  OmpTrace trace;
  switch (algorithm) {
    case ScenarioSource::omp: {
      OmpSelection selection = omp_select(bundle.embedding, options.tolerance, max_iter);
      indices = std::move(selection.indices);
      trace = std::move(selection.trace);
      break;
    }
    case ScenarioSource::maxvol: {
      const Eigen::Index k = std::min<Eigen::Index>(max_iter, bundle.embedding.rank());
      indices = maxvol_select(bundle.embedding.Q, k);
      break;
    }
    default: {  // ghtp
      GhtpResult ghtp = ghtp_select(bundle.embedding.Q.transpose(), bundle.embedding.y_tilde,
                                    options.tolerance * bundle.embedding.y_tilde.norm(),
                                    max_iter);
      indices = std::move(ghtp.support);
      if (indices.empty())
        throw NumericalBreakdownError("extract_with: ghtp selected an empty support");
      break;
    }
  }

  const Eigen::Index r = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd points(r, panel.dim());
  Eigen::MatrixXd V_sel(r, bundle.V.values.cols());
  for (Eigen::Index k = 0; k < r; ++k) {
    points.row(k) = panel.data.row(indices[static_cast<std::size_t>(k)]);
    V_sel.row(k) = bundle.V.values.row(indices[static_cast<std::size_t>(k)]);
  }

  AdmmResult weights = admm_weights(V_sel, bundle.y_hat.values, options.admm);

  ExtractResult out;
  out.scenarios.points = std::move(points);
  out.scenarios.weights = weights.weights;
  out.scenarios.source = algorithm;
  out.scenarios.selected_indices = std::move(indices);
  out.trace = std::move(trace);
  out.weights = std::move(weights);
  return out;
}

ExtractResult extract_scenarios(const SamplePanel& panel, const ExtractOptions& options) {
  return extract_with(panel, ScenarioSource::omp, options);
}

}  // namespace empscen
