#include "empscen/scenario_set.hpp"

#include <fstream>
#include <limits>

#include "empscen/errors.hpp"

namespace empscen {

std::string to_string(ScenarioSource source) {
  switch (source) {
    case ScenarioSource::covariance: return "covariance";
    case ScenarioSource::omp: return "omp";
    case ScenarioSource::maxvol: return "maxvol";
    case ScenarioSource::ghtp: return "ghtp";
    case ScenarioSource::lasserre: return "lasserre";
  }
  return "unknown";
}

ScenarioSource scenario_source_from_string(const std::string& name) {
  if (name == "covariance") return ScenarioSource::covariance;
  if (name == "omp") return ScenarioSource::omp;
  if (name == "maxvol") return ScenarioSource::maxvol;
  if (name == "ghtp") return ScenarioSource::ghtp;
  if (name == "lasserre") return ScenarioSource::lasserre;
  throw InvalidInputError("unknown scenario source: " + name);
}

void save_scenarios_csv(const ScenarioSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write scenario file: " + path);
  out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    out << set.weights[i];
    for (Eigen::Index j = 0; j < set.dim(); ++j) out << ',' << set.points(i, j);
    out << '\n';
  }
}

nlohmann::json scenario_set_json(const ScenarioSet& set, const OmpTrace* trace) {
  nlohmann::json j;
  j["source"] = to_string(set.source);
  j["n_scenarios"] = set.size();
  j["dim"] = set.dim();
  j["weights"] = std::vector<double>(set.weights.data(), set.weights.data() + set.weights.size());
  nlohmann::json points = nlohmann::json::array();
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < set.dim(); ++k) row.push_back(set.points(i, k));
    points.push_back(std::move(row));
  }
  j["points"] = std::move(points);
  if (!set.selected_indices.empty()) {
    std::vector<long long> sel(set.selected_indices.begin(), set.selected_indices.end());
    j["selected_indices"] = sel;
  }
  if (trace != nullptr) {
    j["trace"] = {
        {"residual_norms", trace->residual_norms},
        {"pivot_sequence", std::vector<long long>(trace->pivot_sequence.begin(),
                                                  trace->pivot_sequence.end())},
        {"converged", trace->converged},
    };
  }
  return j;
}

}  // namespace empscen
