#include <cmath>
#include <limits>

#include "mcaux/diagnostics.hpp"
#include "mcaux/errors.hpp"

namespace mcaux {
namespace {

double run_block(Sampler& sampler, ParamVec& theta, std::size_t length, RngStream& rng) {
  std::size_t hits = 0;
  for (std::size_t t = 0; t < length; ++t) {
    StepResult r = sampler.step(theta, rng);
    if (r.accepted) ++hits;
    theta = std::move(r.theta);
  }
  return static_cast<double>(hits) / static_cast<double>(length);
}

}  // namespace

TuneResult tune_step_size(Sampler& sampler, double target_rate, const ParamVec& theta0,
                          RngStream& rng, const TuneOptions& options) {
  if (!(target_rate > 0.0 && target_rate < 1.0)) {
    throw PreconditionError("target acceptance rate must lie in (0, 1)");
  }
  if (options.block == 0 || options.max_blocks == 0 || options.check_block == 0) {
    throw PreconditionError("tuning blocks must be non-empty");
  }
  TuneResult result;
  ParamVec theta = theta0;
  double log_step = std::log(sampler.step_size());
  double best_gap = std::numeric_limits<double>::infinity();

  for (std::size_t k = 1; k <= options.max_blocks; ++k) {
    sampler.set_step_size(std::exp(log_step));
    result.step_history.push_back(sampler.step_size());
    double rate = run_block(sampler, theta, options.block, rng);
    result.pilot_iterations += options.block;
    if (std::fabs(rate - target_rate) <= options.tolerance) {
      rate = run_block(sampler, theta, options.check_block, rng);
      result.pilot_iterations += options.check_block;
      if (std::fabs(rate - target_rate) <= options.tolerance) {
        result.step_size = sampler.step_size();
        result.achieved_rate = rate;
        result.converged = true;
        result.final_theta = theta;
        return result;
      }
    }
    if (std::fabs(rate - target_rate) < best_gap) {
      best_gap = std::fabs(rate - target_rate);
      result.step_size = sampler.step_size();
      result.achieved_rate = rate;
    }
    log_step += std::pow(static_cast<double>(k), -0.6) * (rate - target_rate);
  }
  sampler.set_step_size(result.step_size);
  result.final_theta = theta;
  return result;
}

}  // namespace mcaux
