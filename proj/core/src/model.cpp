#include "mcaux/model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mcaux/errors.hpp"

namespace mcaux {

void BoundedFactorModel::phi_batch(std::span<const std::uint32_t> indices,
                                   const ParamVec& theta, std::span<double> out) const {
  for (std::size_t k = 0; k < indices.size(); ++k) out[k] = phi(indices[k], theta);
}

double BoundedFactorModel::sum_phi(const ParamVec& theta) const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) total += phi(i, theta);
  return total;
}

ParamVec BoundedFactorModel::sum_grad_phi(const ParamVec& theta) const {
  ParamVec g = ParamVec::Zero(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < size(); ++i) accumulate_grad_phi(i, theta, 1.0, g);
  return g;
}

ParamVec BoundedFactorModel::grad_phi(std::size_t i, const ParamVec& theta) const {
  ParamVec g = ParamVec::Zero(static_cast<Eigen::Index>(dim()));
  accumulate_grad_phi(i, theta, 1.0, g);
  return g;
}

void BoundedFactorModel::set_bounds(std::vector<double> bounds) {
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (!(bounds[i] > 0.0) || !std::isfinite(bounds[i])) {
      throw ModelContractError(i, "bound M_i must be positive and finite");
    }
  }
  total_bound_ = std::accumulate(bounds.begin(), bounds.end(), 0.0);
  bounds_ = std::move(bounds);
}

void LipschitzFactorModel::potential_batch(std::span<const std::uint32_t> indices,
                                           const ParamVec& theta, std::span<double> out) const {
  for (std::size_t k = 0; k < indices.size(); ++k) out[k] = potential(indices[k], theta);
}

double LipschitzFactorModel::sum_potential(const ParamVec& theta) const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) total += potential(i, theta);
  return total;
}

ParamVec LipschitzFactorModel::sum_grad_potential(const ParamVec& theta) const {
  ParamVec g = ParamVec::Zero(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < size(); ++i) accumulate_grad_potential(i, theta, 1.0, g);
  return g;
}

ParamVec LipschitzFactorModel::grad_potential(std::size_t i, const ParamVec& theta) const {
  ParamVec g = ParamVec::Zero(static_cast<Eigen::Index>(dim()));
  accumulate_grad_potential(i, theta, 1.0, g);
  return g;
}

void LipschitzFactorModel::set_lipschitz(std::vector<double> constants) {
  for (std::size_t i = 0; i < constants.size(); ++i) {
    if (!(constants[i] > 0.0) || !std::isfinite(constants[i])) {
      throw ModelContractError(i, "Lipschitz constant c_i must be positive and finite");
    }
  }
  total_lipschitz_ = std::accumulate(constants.begin(), constants.end(), 0.0);
  lipschitz_ = std::move(constants);
}

namespace {

double checked(double value, const char* what) {
  if (!std::isfinite(value)) throw NumericError(std::string(what) + ": non-finite value");
  return value;
}

ParamVec checked(ParamVec value, const char* what) {
  if (!value.allFinite()) throw NumericError(std::string(what) + ": non-finite gradient");
  return value;
}

}  // namespace

double full_log_target(const BoundedFactorModel& model, const ParamVec& theta) {
  if (!model.in_support(theta)) throw ZeroDensityError("full_log_target: theta outside support");
  return checked(model.sum_phi(theta), "full_log_target");
}

double full_log_target(const LipschitzFactorModel& model, const ParamVec& theta) {
  if (!model.in_support(theta)) throw ZeroDensityError("full_log_target: theta outside support");
  return checked(-model.sum_potential(theta), "full_log_target");
}

ParamVec full_grad_log_target(const BoundedFactorModel& model, const ParamVec& theta) {
  if (!model.in_support(theta)) {
    throw ZeroDensityError("full_grad_log_target: theta outside support");
  }
  return checked(model.sum_grad_phi(theta), "full_grad_log_target");
}

ParamVec full_grad_log_target(const LipschitzFactorModel& model, const ParamVec& theta) {
  if (!model.in_support(theta)) {
    throw ZeroDensityError("full_grad_log_target: theta outside support");
  }
  return checked(ParamVec(-model.sum_grad_potential(theta)), "full_grad_log_target");
}

BoundCheckReport bound_check(const BoundedFactorModel& model, std::size_t n_probes,
                             RngStream& rng, double tolerance) {
  BoundCheckReport report;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n_probes; ++p) {
    const ParamVec theta = model.random_support_point(rng);
    ++report.probes;
    for (std::size_t i = 0; i < model.size(); ++i) {
      const double value = model.phi(i, theta);
      const double slack = std::min(value, model.bound(i) - value);
      ++report.checks;
      if (slack < report.min_slack) {
        report.min_slack = slack;
        report.worst_index = i;
      }
      if (slack < -tolerance) ++report.violations;
    }
  }
  return report;
}

BoundCheckReport bound_check(const LipschitzFactorModel& model, std::size_t n_probes,
                             RngStream& rng, double tolerance) {
  BoundCheckReport report;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n_probes; ++p) {
    const ParamVec a = model.random_support_point(rng);
    const ParamVec b = model.random_support_point(rng);
    const double dist = model.distance(a, b);
    ++report.probes;
    for (std::size_t i = 0; i < model.size(); ++i) {
      const double slack =
          model.lipschitz(i) * dist - std::fabs(model.potential(i, b) - model.potential(i, a));
      ++report.checks;
      if (slack < report.min_slack) {
        report.min_slack = slack;
        report.worst_index = i;
      }
      if (slack < -tolerance) ++report.violations;
    }
  }
  return report;
}

}  // namespace mcaux
