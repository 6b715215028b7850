#include "mcaux/models/finite_exp_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcaux/errors.hpp"

namespace mcaux::models {
namespace {

double log_sum_exp(const std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - top);
  return top + std::log(s);
}

}  // namespace

FiniteExpFamily::FiniteExpFamily(std::vector<double> grid, std::vector<double> prior_weights,
                                 std::vector<double> statistic, int observed)
    : grid_(std::move(grid)), statistic_(std::move(statistic)), observed_(observed) {
  if (grid_.empty() || grid_.size() != prior_weights.size()) {
    throw PreconditionError("grid and prior weights must be non-empty and equal length");
  }
  if (statistic_.empty()) throw PreconditionError("empty outcome space");
  if (observed_ < 0 || observed_ >= num_outcomes()) throw PreconditionError("observed out of range");
  double total = 0.0;
  for (double w : prior_weights) {
    if (!(w > 0.0)) throw PreconditionError("prior weights must be positive");
    total += w;
  }
  for (double w : prior_weights) log_prior_.push_back(std::log(w / total));
}

int FiniteExpFamily::grid_index(double theta) const {
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (std::fabs(grid_[k] - theta) <= 1e-12) return static_cast<int>(k);
  }
  return -1;
}

double FiniteExpFamily::log_unnormalized(const ParamVec& theta, const int& w) const {
  return theta[0] * statistic_.at(static_cast<std::size_t>(w));
}

double FiniteExpFamily::log_prior(const ParamVec& theta) const {
  const int k = grid_index(theta[0]);
  return k < 0 ? -std::numeric_limits<double>::infinity()
               : log_prior_[static_cast<std::size_t>(k)];
}

double FiniteExpFamily::log_partition(double theta) const {
  std::vector<double> terms(statistic_.size());
  for (std::size_t w = 0; w < statistic_.size(); ++w) terms[w] = theta * statistic_[w];
  return log_sum_exp(terms);
}

std::vector<double> FiniteExpFamily::outcome_pmf(double theta) const {
  const double log_z = log_partition(theta);
  std::vector<double> pmf(statistic_.size());
  for (std::size_t w = 0; w < statistic_.size(); ++w) {
    pmf[w] = std::exp(theta * statistic_[w] - log_z);
  }
  return pmf;
}

int FiniteExpFamily::simulate(const ParamVec& theta, RngStream& rng) const {
  const std::vector<double> pmf = outcome_pmf(theta[0]);
  const double u = rng.uniform();
  double cdf = 0.0;
  for (std::size_t w = 0; w < pmf.size(); ++w) {
    cdf += pmf[w];
    if (u < cdf) return static_cast<int>(w);
  }
  return num_outcomes() - 1;
}

std::vector<double> FiniteExpFamily::posterior() const {
  std::vector<double> logp(grid_.size());
  const double s_obs = statistic_[static_cast<std::size_t>(observed_)];
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    logp[k] = log_prior_[k] + grid_[k] * s_obs - log_partition(grid_[k]);
  }
  const double log_norm = log_sum_exp(logp);
  for (double& v : logp) v = std::exp(v - log_norm);
  return logp;
}

double FiniteExpFamily::posterior_mean() const {
  const std::vector<double> p = posterior();
  double m = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) m += p[k] * grid_[k];
  return m;
}

double FiniteExpFamily::posterior_variance() const {
  const std::vector<double> p = posterior();
  const double m = posterior_mean();
  double v = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) v += p[k] * (grid_[k] - m) * (grid_[k] - m);
  return v;
}

}  // namespace mcaux::models
