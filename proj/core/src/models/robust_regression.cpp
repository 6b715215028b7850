#include "mcaux/models/robust_regression.hpp"

#include <cmath>

#include "mcaux/errors.hpp"

namespace mcaux::models {

RobustLinReg::RobustLinReg(RowMatrix x, Eigen::VectorXd y, double dof, double beta, double radius)
    : x_(std::move(x)),
      y_(std::move(y)),
      dof_(dof),
      beta_(beta),
      radius_(radius),
      scale_(0.5 * beta * (dof + 1.0)) {
  if (x_.rows() == 0 || x_.cols() == 0) throw PreconditionError("empty data");
  if (y_.size() != x_.rows()) throw PreconditionError("responses length != rows of x");
  if (!(dof_ > 0.0) || !(beta_ > 0.0) || !(radius_ > 0.0)) {
    throw PreconditionError("dof, beta and radius must be positive");
  }
  std::vector<double> bounds(size());
  for (Eigen::Index i = 0; i < x_.rows(); ++i) {
    const double reach = std::fabs(y_[i]) + x_.row(i).norm() * radius_;
    bounds[static_cast<std::size_t>(i)] = scale_ * std::log1p(reach * reach / dof_);
  }
  set_bounds(std::move(bounds));
}

bool RobustLinReg::in_support(const ParamVec& theta) const {
  return theta.size() == x_.cols() && theta.squaredNorm() <= radius_ * radius_;
}

double RobustLinReg::phi(std::size_t i, const ParamVec& theta) const {
  const auto ii = static_cast<Eigen::Index>(i);
  const double r = y_[ii] - x_.row(ii).dot(theta);
  return bound(i) - scale_ * std::log1p(r * r / dof_);
}

void RobustLinReg::accumulate_grad_phi(std::size_t i, const ParamVec& theta, double scale,
                                       ParamVec& out) const {
  const auto ii = static_cast<Eigen::Index>(i);
  const double r = y_[ii] - x_.row(ii).dot(theta);
  out += (scale * scale_ * 2.0 * r / (dof_ + r * r)) * x_.row(ii).transpose();
}

ParamVec RobustLinReg::random_support_point(RngStream& rng) const {
  ParamVec dir(x_.cols());
  for (Eigen::Index j = 0; j < dir.size(); ++j) dir[j] = rng.normal();
  const double r = radius_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(dir.size()));
  return dir.normalized() * r;
}

double RobustLinReg::sum_phi(const ParamVec& theta) const {
  const Eigen::ArrayXd r = (y_ - x_ * theta).array();
  return total_bound() - scale_ * (r.square() / dof_).log1p().sum();
}

ParamVec RobustLinReg::sum_grad_phi(const ParamVec& theta) const {
  const Eigen::ArrayXd r = (y_ - x_ * theta).array();
  const Eigen::VectorXd w = (2.0 * scale_ * r / (dof_ + r.square())).matrix();
  return x_.transpose() * w;
}

ParamVec RobustLinReg::worst_case_point(std::size_t i) const {
  const auto ii = static_cast<Eigen::Index>(i);
  const double sign = y_[ii] >= 0.0 ? -1.0 : 1.0;
  return sign * radius_ * x_.row(ii).transpose().normalized();
}

}  // namespace mcaux::models
