#pragma once

#include "mcaux/model.hpp"

namespace mcaux::models {

// Tempered Student-t regression, flat prior on the ball ||theta|| <= radius.
class RobustLinReg final : public BoundedFactorModel {
 public:
  RobustLinReg(RowMatrix x, Eigen::VectorXd y, double dof, double beta, double radius);

  std::size_t size() const override { return static_cast<std::size_t>(x_.rows()); }
  std::size_t dim() const override { return static_cast<std::size_t>(x_.cols()); }
  bool in_support(const ParamVec& theta) const override;
  double phi(std::size_t i, const ParamVec& theta) const override;
  void accumulate_grad_phi(std::size_t i, const ParamVec& theta, double scale,
                           ParamVec& out) const override;
  ParamVec random_support_point(RngStream& rng) const override;
  double sum_phi(const ParamVec& theta) const override;
  ParamVec sum_grad_phi(const ParamVec& theta) const override;

  // Point of the ball where phi_i hits zero.
  ParamVec worst_case_point(std::size_t i) const;

  const RowMatrix& covariates() const noexcept { return x_; }
  const Eigen::VectorXd& responses() const noexcept { return y_; }
  double dof() const noexcept { return dof_; }
  double beta() const noexcept { return beta_; }
  double radius() const noexcept { return radius_; }

 private:
  RowMatrix x_;
  Eigen::VectorXd y_;
  double dof_;
  double beta_;
  double radius_;
  double scale_;  // beta * (dof + 1) / 2
};

}  // namespace mcaux::models
