#pragma once

#include <span>

#include "mcaux/model.hpp"

namespace mcaux::models {

// Flat-prior logistic regression; labels are 0 or 1.
class BayesLogistic final : public LipschitzFactorModel {
 public:
  BayesLogistic(RowMatrix x, Eigen::VectorXd y);

  std::size_t size() const override { return static_cast<std::size_t>(x_.rows()); }
  std::size_t dim() const override { return static_cast<std::size_t>(x_.cols()); }
  double potential(std::size_t i, const ParamVec& theta) const override;
  void accumulate_grad_potential(std::size_t i, const ParamVec& theta, double scale,
                                 ParamVec& out) const override;
  double distance(const ParamVec& a, const ParamVec& b) const override;
  ParamVec random_support_point(RngStream& rng) const override;
  double sum_potential(const ParamVec& theta) const override;
  ParamVec sum_grad_potential(const ParamVec& theta) const override;

  const RowMatrix& covariates() const noexcept { return x_; }
  const Eigen::VectorXd& labels() const noexcept { return y_; }

 private:
  RowMatrix x_;
  Eigen::VectorXd y_;
};

double sigmoid(double z);
// log(1 + exp(z)) without overflow.
double softplus(double z);

// Accuracy of the posterior predictive: class probabilities averaged over
// the samples, thresholded at 1/2.
double predictive_accuracy(const RowMatrix& x, const Eigen::VectorXd& y,
                           std::span<const ParamVec> samples);

}  // namespace mcaux::models
