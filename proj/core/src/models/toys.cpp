#include "mcaux/models/toys.hpp"

#include "mcaux/errors.hpp"

namespace mcaux::models {

LinearPotentials::LinearPotentials(RowMatrix slopes, Eigen::VectorXd offsets)
    : slopes_(std::move(slopes)), offsets_(std::move(offsets)) {
  if (offsets_.size() != slopes_.rows()) throw PreconditionError("offsets length != rows");
  std::vector<double> c(size());
  for (Eigen::Index i = 0; i < slopes_.rows(); ++i) {
    c[static_cast<std::size_t>(i)] = slopes_.row(i).norm();
  }
  set_lipschitz(std::move(c));
}

double LinearPotentials::potential(std::size_t i, const ParamVec& theta) const {
  const auto ii = static_cast<Eigen::Index>(i);
  return slopes_.row(ii).dot(theta) + offsets_[ii];
}

void LinearPotentials::accumulate_grad_potential(std::size_t i, const ParamVec&, double scale,
                                                 ParamVec& out) const {
  out += scale * slopes_.row(static_cast<Eigen::Index>(i)).transpose();
}

double LinearPotentials::distance(const ParamVec& a, const ParamVec& b) const {
  return (b - a).norm();
}

ParamVec LinearPotentials::random_support_point(RngStream& rng) const {
  ParamVec theta(slopes_.cols());
  for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] = rng.normal();
  return theta;
}

GridToy<TruncatedHeteroGaussian> gaussian_grid_toy() {
  RowMatrix y(3, 1);
  y << -0.6, 0.2, 0.9;
  Eigen::VectorXd sigma(1);
  sigma << 1.0;
  return {std::make_shared<TruncatedHeteroGaussian>(std::move(y), 0.5, std::move(sigma), 1.0),
          {-1.0, -0.5, 0.0, 0.5, 1.0}};
}

GridToy<BayesLogistic> logistic_grid_toy() {
  RowMatrix x(3, 1);
  x << 0.8, -0.5, 1.2;
  Eigen::VectorXd y(3);
  y << 1.0, 0.0, 1.0;
  return {std::make_shared<BayesLogistic>(std::move(x), std::move(y)),
          {-0.6, -0.3, 0.0, 0.3, 0.6}};
}

FiniteExpFamily exchange_toy() {
  return FiniteExpFamily({-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5}, std::vector<double>(7, 1.0),
                         {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, 3);
}

}  // namespace mcaux::models
