#include "mcaux/models/truncated_gaussian.hpp"

#include <cmath>
#include <numbers>

#include "mcaux/errors.hpp"

namespace mcaux::models {
namespace {

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

struct TruncatedMoments {
  double mean;
  double variance;
};

TruncatedMoments truncated_normal(double mu, double sd, double lo, double hi) {
  const double a = (lo - mu) / sd;
  const double b = (hi - mu) / sd;
  const double z = std_normal_cdf(b) - std_normal_cdf(a);
  const double pa = std_normal_pdf(a);
  const double pb = std_normal_pdf(b);
  const double shift = (pa - pb) / z;
  return {mu + sd * shift, sd * sd * (1.0 + (a * pa - b * pb) / z - shift * shift)};
}

}  // namespace

TruncatedHeteroGaussian::TruncatedHeteroGaussian(RowMatrix y, double beta,
                                                 Eigen::VectorXd sigma_diag, double half_width)
    : y_(std::move(y)),
      beta_(beta),
      sigma_diag_(std::move(sigma_diag)),
      half_width_(half_width) {
  if (y_.rows() == 0 || y_.cols() == 0) throw PreconditionError("empty data");
  if (sigma_diag_.size() != y_.cols()) throw PreconditionError("sigma_diag length != d");
  if (!(beta_ > 0.0) || !(half_width_ > 0.0)) {
    throw PreconditionError("beta and half_width must be positive");
  }
  if ((sigma_diag_.array() <= 0.0).any()) throw PreconditionError("sigma_diag must be positive");
  precision_ = sigma_diag_.cwiseInverse();
  max_precision_ = 1.0 / sigma_diag_.minCoeff();

  std::vector<double> bounds(size());
  for (Eigen::Index i = 0; i < y_.rows(); ++i) {
    const double reach = (y_.row(i).array().abs() + half_width_).square().sum();
    bounds[static_cast<std::size_t>(i)] = 0.5 * beta_ * max_precision_ * reach;
  }
  set_bounds(std::move(bounds));
}

bool TruncatedHeteroGaussian::in_support(const ParamVec& theta) const {
  return theta.size() == y_.cols() && (theta.array().abs() <= half_width_).all();
}

double TruncatedHeteroGaussian::phi(std::size_t i, const ParamVec& theta) const {
  const auto row = y_.row(static_cast<Eigen::Index>(i));
  double q = 0.0;
  for (Eigen::Index j = 0; j < y_.cols(); ++j) {
    const double r = theta[j] - row[j];
    q += precision_[j] * r * r;
  }
  return bound(i) - 0.5 * beta_ * q;
}

void TruncatedHeteroGaussian::accumulate_grad_phi(std::size_t i, const ParamVec& theta,
                                                  double scale, ParamVec& out) const {
  const auto row = y_.row(static_cast<Eigen::Index>(i));
  for (Eigen::Index j = 0; j < y_.cols(); ++j) {
    out[j] -= scale * beta_ * precision_[j] * (theta[j] - row[j]);
  }
}

ParamVec TruncatedHeteroGaussian::random_support_point(RngStream& rng) const {
  ParamVec theta(y_.cols());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    theta[j] = half_width_ * (2.0 * rng.uniform() - 1.0);
  }
  return theta;
}

double TruncatedHeteroGaussian::sum_phi(const ParamVec& theta) const {
  const double q = ((y_.rowwise() - theta.transpose()).array().square().matrix() * precision_).sum();
  return total_bound() - 0.5 * beta_ * q;
}

ParamVec TruncatedHeteroGaussian::sum_grad_phi(const ParamVec& theta) const {
  const Eigen::VectorXd resid_sum =
      static_cast<double>(y_.rows()) * theta - y_.colwise().sum().transpose();
  return -beta_ * precision_.cwiseProduct(resid_sum);
}

Eigen::VectorXd TruncatedHeteroGaussian::posterior_mean() const {
  const double n = static_cast<double>(y_.rows());
  const Eigen::VectorXd ybar = y_.colwise().mean().transpose();
  Eigen::VectorXd mean(y_.cols());
  for (Eigen::Index j = 0; j < y_.cols(); ++j) {
    const double sd = std::sqrt(sigma_diag_[j] / (beta_ * n));
    mean[j] = truncated_normal(ybar[j], sd, -half_width_, half_width_).mean;
  }
  return mean;
}

Eigen::VectorXd TruncatedHeteroGaussian::posterior_variance() const {
  const double n = static_cast<double>(y_.rows());
  const Eigen::VectorXd ybar = y_.colwise().mean().transpose();
  Eigen::VectorXd var(y_.cols());
  for (Eigen::Index j = 0; j < y_.cols(); ++j) {
    const double sd = std::sqrt(sigma_diag_[j] / (beta_ * n));
    var[j] = truncated_normal(ybar[j], sd, -half_width_, half_width_).variance;
  }
  return var;
}

}  // namespace mcaux::models
