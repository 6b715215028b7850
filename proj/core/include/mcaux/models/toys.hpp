#pragma once

#include <memory>
#include <vector>

#include "mcaux/model.hpp"
#include "mcaux/models/finite_exp_family.hpp"
#include "mcaux/models/logistic.hpp"
#include "mcaux/models/truncated_gaussian.hpp"

namespace mcaux::models {

// U_i(theta) = a_i . theta + b_i; c_i = ||a_i||, distance is Euclidean.
// Sits exactly on the Lipschitz boundary along a_i.
class LinearPotentials final : public LipschitzFactorModel {
 public:
  LinearPotentials(RowMatrix slopes, Eigen::VectorXd offsets);

  std::size_t size() const override { return static_cast<std::size_t>(slopes_.rows()); }
  std::size_t dim() const override { return static_cast<std::size_t>(slopes_.cols()); }
  double potential(std::size_t i, const ParamVec& theta) const override;
  void accumulate_grad_potential(std::size_t i, const ParamVec& theta, double scale,
                                 ParamVec& out) const override;
  double distance(const ParamVec& a, const ParamVec& b) const override;
  ParamVec random_support_point(RngStream& rng) const override;

 private:
  RowMatrix slopes_;
  Eigen::VectorXd offsets_;
};

// A one-dimensional model restricted to a handful of grid points.
template <class Model>
struct GridToy {
  std::shared_ptr<const Model> model;
  std::vector<double> grid;
};

// N = 3 truncated Gaussian, 5 grid points in [-1, 1].
GridToy<TruncatedHeteroGaussian> gaussian_grid_toy();
// N = 3 logistic regression, 5 grid points in [-0.6, 0.6].
GridToy<BayesLogistic> logistic_grid_toy();
// Outcomes 0..5 with identity statistic, 7 grid points, uniform prior.
FiniteExpFamily exchange_toy();

}  // namespace mcaux::models
