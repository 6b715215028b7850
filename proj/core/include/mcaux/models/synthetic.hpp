#pragma once

#include <filesystem>
#include <optional>

#include "mcaux/rng.hpp"
#include "mcaux/types.hpp"

namespace mcaux::models {

struct RegressionData {
  RowMatrix x;
  Eigen::VectorXd y;
};

// y_i ~ N(0, diag(sigma_diag)).
RowMatrix synth_gaussian_data(std::size_t n, const Eigen::VectorXd& sigma_diag, RngStream& rng);
// x_i ~ N(0, I_d), y_i = sum_j x_ij + N(0, 1).
RegressionData synth_robust_data(std::size_t n, std::size_t d, RngStream& rng);
// x_i ~ N(0, I_d), y_i ~ Bernoulli(sigmoid(x_i . truth)).
RegressionData synth_logistic_data(std::size_t n, const Eigen::VectorXd& truth, RngStream& rng);

// Header x_0..x_{d-1}[,y] (or y_0.. when the matrix is the response).
void write_data_csv(const std::filesystem::path& path, const RowMatrix& x,
                    const std::optional<Eigen::VectorXd>& y, const char* column_prefix = "x");
RegressionData read_data_csv(const std::filesystem::path& path, bool has_response);

}  // namespace mcaux::models
