#include "empscen/sample_panel.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <vector>

#include "empscen/errors.hpp"

namespace empscen {

SamplePanel make_panel(Eigen::MatrixXd data) {
  if (data.rows() < 1 || data.cols() < 1)
    throw InvalidInputError("panel must have at least one row and one column");
  if (!data.allFinite()) throw InvalidInputError("panel contains non-finite entries");
  return SamplePanel{std::move(data)};
}

Eigen::MatrixXd Standardization::apply(const Eigen::MatrixXd& points) const {
  return (points.rowwise() - center.transpose()).array().rowwise() /
         scale.transpose().array();
}

Eigen::MatrixXd Standardization::invert(const Eigen::MatrixXd& points) const {
  return (points.array().rowwise() * scale.transpose().array()).rowwise() +
         center.transpose().array();
}

Standardization fit_standardization(const SamplePanel& panel) {
  Standardization out;
  out.center = panel.data.colwise().mean().transpose();
  Eigen::MatrixXd centered = panel.data.rowwise() - out.center.transpose();
  out.scale = (centered.colwise().squaredNorm() / static_cast<double>(panel.n()))
                  .cwiseSqrt()
                  .transpose();
  for (Eigen::Index j = 0; j < out.scale.size(); ++j)
    if (!(out.scale[j] > 1e-300)) out.scale[j] = 1.0;
  return out;
}

namespace {

std::vector<double> parse_row(const std::string& line, const std::string& path, std::size_t lineno) {
  std::vector<double> row;
  std::size_t begin = 0;
  while (begin <= line.size()) {
    std::size_t end = line.find(',', begin);
    if (end == std::string::npos) end = line.size();
    std::size_t a = begin;
    std::size_t b = end;
    while (a < b && std::isspace(static_cast<unsigned char>(line[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(line[b - 1]))) --b;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(line.data() + a, line.data() + b, value);
    if (ec != std::errc{} || ptr != line.data() + b)
      throw InvalidInputError(path + ":" + std::to_string(lineno) + ": cannot parse '" +
                              line.substr(a, b - a) + "' as a number");
    row.push_back(value);
    begin = end + 1;
    if (end == line.size()) break;
  }
  return row;
}

}  // namespace

SamplePanel load_panel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open panel file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row = parse_row(line, path, lineno);
    if (!rows.empty() && row.size() != rows.front().size())
      throw InvalidInputError(path + ":" + std::to_string(lineno) +
                              ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInputError("panel file is empty: " + path);
  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    for (Eigen::Index j = 0; j < data.cols(); ++j)
      data(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return make_panel(std::move(data));
}

void save_panel_csv(const SamplePanel& panel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write panel file: " + path);
  out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < panel.n(); ++i) {
    for (Eigen::Index j = 0; j < panel.dim(); ++j) {
      if (j > 0) out << ',';
      out << panel.data(i, j);
    }
    out << '\n';
  }
}

}  // namespace empscen
