#include "mcaux/models/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mcaux/errors.hpp"
#include "mcaux/models/logistic.hpp"

namespace mcaux::models {

RowMatrix synth_gaussian_data(std::size_t n, const Eigen::VectorXd& sigma_diag, RngStream& rng) {
  if (n == 0 || sigma_diag.size() == 0) throw PreconditionError("synth_gaussian_data: empty shape");
  const Eigen::VectorXd sd = sigma_diag.cwiseSqrt();
  RowMatrix y(static_cast<Eigen::Index>(n), sigma_diag.size());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.cols(); ++j) y(i, j) = sd[j] * rng.normal();
  }
  return y;
}

RegressionData synth_robust_data(std::size_t n, std::size_t d, RngStream& rng) {
  if (n == 0 || d == 0) throw PreconditionError("synth_robust_data: empty shape");
  RegressionData data{RowMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)),
                      Eigen::VectorXd(static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    double total = 0.0;
    for (Eigen::Index j = 0; j < data.x.cols(); ++j) {
      data.x(i, j) = rng.normal();
      total += data.x(i, j);
    }
    data.y[i] = total + rng.normal();
  }
  return data;
}

RegressionData synth_logistic_data(std::size_t n, const Eigen::VectorXd& truth, RngStream& rng) {
  if (n == 0 || truth.size() == 0) throw PreconditionError("synth_logistic_data: empty shape");
  RegressionData data{RowMatrix(static_cast<Eigen::Index>(n), truth.size()),
                      Eigen::VectorXd(static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.x.cols(); ++j) data.x(i, j) = rng.normal();
    data.y[i] = rng.uniform() < sigmoid(data.x.row(i).dot(truth)) ? 1.0 : 0.0;
  }
  return data;
}

void write_data_csv(const std::filesystem::path& path, const RowMatrix& x,
                    const std::optional<Eigen::VectorXd>& y, const char* column_prefix) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(17);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    out << (j ? "," : "") << column_prefix << '_' << j;
  }
  if (y) out << ",y";
  out << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << (j ? "," : "") << x(i, j);
    if (y) out << ',' << (*y)[i];
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

RegressionData read_data_csv(const std::filesystem::path& path, bool has_response) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty csv: " + path.string());
  const auto columns = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ',') + 1);
  const Eigen::Index xcols = has_response ? columns - 1 : columns;
  if (xcols < 1) throw Error("csv needs at least one covariate column: " + path.string());

  std::vector<double> values;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Eigen::Index seen = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++seen;
    }
    if (seen != columns) {
      throw Error(path.string() + ": row " + std::to_string(rows + 1) + " has " +
                  std::to_string(seen) + " columns, expected " + std::to_string(columns));
    }
    ++rows;
  }
  RegressionData data{RowMatrix(rows, xcols), Eigen::VectorXd(has_response ? rows : 0)};
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < xcols; ++j) data.x(i, j) = values[static_cast<std::size_t>(i * columns + j)];
    if (has_response) data.y[i] = values[static_cast<std::size_t>(i * columns + xcols)];
  }
  return data;
}

}  // namespace mcaux::models
