#include "empscen/returns.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <vector>

#include "empscen/errors.hpp"
#include "empscen/rng.hpp"

namespace empscen {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (begin <= line.size()) {
    std::size_t end = line.find(',', begin);
    if (end == std::string::npos) end = line.size();
    std::size_t a = begin;
    std::size_t b = end;
    while (a < b && std::isspace(static_cast<unsigned char>(line[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(line[b - 1]))) --b;
    fields.push_back(line.substr(a, b - a));
    if (end == line.size()) break;
    begin = end + 1;
  }
  return fields;
}

bool is_yyyymmdd(const std::string& token) {
  if (token.size() != 8) return false;
  return std::all_of(token.begin(), token.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_date_token(const std::string& token) {
  if (is_yyyymmdd(token)) return true;
  // also accept YYYY-MM-DD
  if (token.size() == 10 && token[4] == '-' && token[7] == '-') {
    for (std::size_t i = 0; i < token.size(); ++i) {
      if (i == 4 || i == 7) continue;
      if (!std::isdigit(static_cast<unsigned char>(token[i]))) return false;
    }
    return true;
  }
  return false;
}

double parse_field(const std::string& field, const std::string& path, std::size_t lineno) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw InvalidInputError(path + ":" + std::to_string(lineno) + ": cannot parse '" + field +
                            "' as a return");
  return value;
}

bool is_missing_code(double value) {
  return std::abs(value - (-99.99)) < 1e-9 || std::abs(value - (-999.0)) < 1e-9;
}

}  // namespace

ReturnsPanel load_returns(const std::string& path, ReturnsFormat format) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open returns file: " + path);

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }

  ReturnsPanel panel;
  std::vector<std::vector<double>> rows;
  Eigen::Index d = -1;

  std::size_t first_data = 0;
  if (format == ReturnsFormat::famafrench_csv) {
    // the data block starts at the first row whose leading field is a date
    while (first_data < lines.size()) {
      std::vector<std::string> fields = split_csv(lines[first_data]);
      if (fields.size() >= 2 && is_yyyymmdd(fields[0])) break;
      ++first_data;
    }
    if (first_data == lines.size())
      throw InvalidInputError(path + ": no data rows found (expected YYYYMMDD dates)");
    if (first_data > 0) {
      std::vector<std::string> header = split_csv(lines[first_data - 1]);
      std::vector<std::string> data_fields = split_csv(lines[first_data]);
      if (header.size() == data_fields.size())
        panel.asset_names.assign(header.begin() + 1, header.end());
    }
  }

  for (std::size_t i = first_data; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (lines[i].empty()) {
      if (format == ReturnsFormat::famafrench_csv && !rows.empty()) break;  // annual section follows
      continue;
    }
    std::vector<std::string> fields = split_csv(lines[i]);
    if (format == ReturnsFormat::famafrench_csv && !is_yyyymmdd(fields[0])) {
      if (!rows.empty()) break;  // end of the daily block
      continue;
    }
    if (fields.size() < 2)
      throw InvalidInputError(path + ":" + std::to_string(lineno) + ": expected date plus returns");
    if (!is_date_token(fields[0]))
      throw InvalidInputError(path + ":" + std::to_string(lineno) + ": malformed date '" +
                              fields[0] + "'");

    std::vector<double> row;
    row.reserve(fields.size() - 1);
    bool missing = false;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const double value = parse_field(fields[k], path, lineno);
      if (format == ReturnsFormat::famafrench_csv && is_missing_code(value)) missing = true;
      row.push_back(value);
    }
    if (d < 0) d = static_cast<Eigen::Index>(row.size());
    if (static_cast<Eigen::Index>(row.size()) != d)
      throw InvalidInputError(path + ":" + std::to_string(lineno) + ": inconsistent column count");
    if (missing) {
      ++panel.rows_dropped;
      continue;
    }
    panel.dates.push_back(fields[0]);
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw InvalidInputError(path + ": no usable return rows");
  panel.returns.resize(static_cast<Eigen::Index>(rows.size()), d);
  for (Eigen::Index i = 0; i < panel.returns.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      panel.returns(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  if (panel.asset_names.empty())
    for (Eigen::Index j = 0; j < d; ++j) panel.asset_names.push_back("A" + std::to_string(j + 1));
  return panel;
}

ReturnsPanel synthetic_returns(std::uint64_t seed, Eigen::Index T, int d) {
  if (T < 1 || d < 1) throw InvalidInputError("synthetic_returns: T and d must be >= 1");
  Rng root = Rng(seed).split("synthetic-returns");
  Rng mean_rng = root.split("means");
  Rng cov_rng = root.split("covariances");
  Rng sample_rng = root.split("samples");

  constexpr int kClusters = 3;
  Eigen::MatrixXd means(kClusters, d);
  for (int k = 0; k < kClusters; ++k)
    for (int j = 0; j < d; ++j) means(k, j) = mean_rng.uniform(-0.05, 0.08);
  // a money-market-like first asset: small positive drift, tiny volatility,
  // so caps taken from naive-portfolio loss quantiles stay attainable
  for (int k = 0; k < kClusters; ++k) means(k, 0) = 0.015;

  std::vector<Eigen::MatrixXd> factors;
  for (int k = 0; k < kClusters; ++k) {
    Eigen::MatrixXd gaussian(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) gaussian(i, j) = cov_rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
    Eigen::MatrixXd U = qr.householderQ();
    Eigen::VectorXd eigenvalues(d);
    for (int i = 0; i < d; ++i) {
      double lambda = cov_rng.normal() + 1.0;
      while (lambda <= 0.0) lambda = cov_rng.normal() + 1.0;
      eigenvalues[i] = 0.5 * lambda;  // ~0.7% daily volatility
    }
    Eigen::MatrixXd A = U.transpose() * eigenvalues.cwiseSqrt().asDiagonal();
    A.row(0) *= 0.05;
    factors.push_back(std::move(A));
  }

  ReturnsPanel panel;
  panel.returns.resize(T, d);
  Eigen::VectorXd z(d);
  for (Eigen::Index t = 0; t < T; ++t) {
    const double u = sample_rng.uniform01();
    const int k = u < 0.6 ? 0 : (u < 0.9 ? 1 : 2);
    for (int j = 0; j < d; ++j) z[j] = sample_rng.normal();
    panel.returns.row(t) = means.row(k) + (factors[static_cast<std::size_t>(k)] * z).transpose();
    panel.dates.push_back("D" + std::to_string(t + 1));
  }
  for (int j = 0; j < d; ++j) panel.asset_names.push_back("A" + std::to_string(j + 1));
  return panel;
}

}  // namespace empscen
