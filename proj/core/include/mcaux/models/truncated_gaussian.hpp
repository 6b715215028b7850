#pragma once

#include "mcaux/model.hpp"

namespace mcaux::models {

// Tempered Gaussian likelihood with diagonal covariance, flat prior on the
// cube [-half_width, half_width]^d.
class TruncatedHeteroGaussian final : public BoundedFactorModel {
 public:
  TruncatedHeteroGaussian(RowMatrix y, double beta, Eigen::VectorXd sigma_diag,
                          double half_width);

  std::size_t size() const override { return static_cast<std::size_t>(y_.rows()); }
  std::size_t dim() const override { return static_cast<std::size_t>(y_.cols()); }
  bool in_support(const ParamVec& theta) const override;
  double phi(std::size_t i, const ParamVec& theta) const override;
  void accumulate_grad_phi(std::size_t i, const ParamVec& theta, double scale,
                           ParamVec& out) const override;
  ParamVec random_support_point(RngStream& rng) const override;
  double sum_phi(const ParamVec& theta) const override;
  ParamVec sum_grad_phi(const ParamVec& theta) const override;

  const RowMatrix& data() const noexcept { return y_; }
  double beta() const noexcept { return beta_; }
  const Eigen::VectorXd& sigma_diag() const noexcept { return sigma_diag_; }
  double half_width() const noexcept { return half_width_; }
  // Largest eigenvalue of the precision matrix, 1 / min(sigma_diag).
  double max_precision() const noexcept { return max_precision_; }

  // The posterior factorises into independent truncated normals; exact
  // per-coordinate mean and variance.
  Eigen::VectorXd posterior_mean() const;
  Eigen::VectorXd posterior_variance() const;

 private:
  RowMatrix y_;
  double beta_;
  Eigen::VectorXd sigma_diag_;
  Eigen::VectorXd precision_;
  double half_width_;
  double max_precision_;
};

}  // namespace mcaux::models
