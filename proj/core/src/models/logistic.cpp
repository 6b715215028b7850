#include "mcaux/models/logistic.hpp"

#include <cmath>

#include "mcaux/errors.hpp"

namespace mcaux::models {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

BayesLogistic::BayesLogistic(RowMatrix x, Eigen::VectorXd y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() == 0 || x_.cols() == 0) throw PreconditionError("empty data");
  if (y_.size() != x_.rows()) throw PreconditionError("labels length != rows of x");
  if (((y_.array() != 0.0) && (y_.array() != 1.0)).any()) {
    throw PreconditionError("labels must be 0 or 1");
  }
  std::vector<double> c(size());
  for (Eigen::Index i = 0; i < x_.rows(); ++i) c[static_cast<std::size_t>(i)] = x_.row(i).norm();
  set_lipschitz(std::move(c));
}

double BayesLogistic::potential(std::size_t i, const ParamVec& theta) const {
  const auto ii = static_cast<Eigen::Index>(i);
  const double z = x_.row(ii).dot(theta);
  return softplus(z) - y_[ii] * z;
}

void BayesLogistic::accumulate_grad_potential(std::size_t i, const ParamVec& theta, double scale,
                                              ParamVec& out) const {
  const auto ii = static_cast<Eigen::Index>(i);
  const double z = x_.row(ii).dot(theta);
  out += (scale * (sigmoid(z) - y_[ii])) * x_.row(ii).transpose();
}

double BayesLogistic::distance(const ParamVec& a, const ParamVec& b) const {
  return (b - a).norm();
}

ParamVec BayesLogistic::random_support_point(RngStream& rng) const {
  ParamVec theta(x_.cols());
  for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] = 2.0 * rng.normal();
  return theta;
}

double BayesLogistic::sum_potential(const ParamVec& theta) const {
  const Eigen::VectorXd z = x_ * theta;
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) total += softplus(z[i]) - y_[i] * z[i];
  return total;
}

ParamVec BayesLogistic::sum_grad_potential(const ParamVec& theta) const {
  Eigen::VectorXd w = x_ * theta;
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = sigmoid(w[i]) - y_[i];
  return x_.transpose() * w;
}

double predictive_accuracy(const RowMatrix& x, const Eigen::VectorXd& y,
                           std::span<const ParamVec> samples) {
  if (samples.empty()) throw PreconditionError("predictive_accuracy: no samples");
  if (x.rows() == 0) throw PreconditionError("predictive_accuracy: empty holdout");
  Eigen::MatrixXd thetas(x.cols(), static_cast<Eigen::Index>(samples.size()));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    thetas.col(static_cast<Eigen::Index>(s)) = samples[s];
  }
  const Eigen::MatrixXd z = x * thetas;
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    double p = 0.0;
    for (Eigen::Index s = 0; s < z.cols(); ++s) p += sigmoid(z(i, s));
    p /= static_cast<double>(z.cols());
    const double label = p >= 0.5 ? 1.0 : 0.0;
    if (label == y[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(z.rows());
}

}  // namespace mcaux::models
