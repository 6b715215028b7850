#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mcaux/chain.hpp"
#include "mcaux/types.hpp"

namespace mcaux {

// Normalised autocorrelations rho_0..rho_{n-1} (FFT based).
std::vector<double> autocorrelation(std::span<const double> x);

// n / tau with tau from Geyer's initial monotone sequence, capped at n.
// Needs n >= 100; a constant column throws UndefinedEssError.
double ess(std::span<const double> x);

struct EssReport {
  std::vector<double> per_dim;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  double seconds = 0.0;
  double min_per_second = 0.0;
  double median_per_second = 0.0;
  double max_per_second = 0.0;
};

// Discards the first burn_in_fraction of the rows. Seconds are the sampling
// loop time of the kept rows.
EssReport ess_report(const ChainTrace& trace, double burn_in_fraction = 0.1);

class RunningMoments {
 public:
  explicit RunningMoments(std::size_t dim);
  void add(const ParamVec& x);
  std::size_t count() const noexcept { return count_; }
  const ParamVec& mean() const noexcept { return mean_; }
  // Unbiased; zero until two samples are in.
  ParamVec variance() const;

 private:
  std::size_t count_ = 0;
  ParamVec mean_;
  ParamVec m2_;
};

struct MsePoint {
  std::size_t step = 0;
  double seconds = 0.0;
  double mse_mean = 0.0;
  // NaN when no reference variance was supplied.
  double mse_var = 0.0;
};

// 0, then about points_per_decade log-spaced steps up to and including
// steps.
std::vector<std::size_t> log_spaced_steps(std::size_t steps, std::size_t points_per_decade = 20);

// Streaming MSE of the running mean (and variance) against a reference,
// averaged over dimensions and recorded at the requested steps.
class MseTracker {
 public:
  MseTracker(ParamVec ref_mean, std::optional<ParamVec> ref_var, std::vector<std::size_t> steps);
  // Feed states in order: step 0 is theta_0.
  void observe(std::size_t step, double seconds, const ParamVec& theta);
  const std::vector<MsePoint>& points() const noexcept { return points_; }

 private:
  ParamVec ref_mean_;
  std::optional<ParamVec> ref_var_;
  std::vector<std::size_t> steps_;
  std::size_t next_ = 0;
  RunningMoments moments_;
  std::vector<MsePoint> points_;
};

std::vector<MsePoint> mse_vs_reference(const ChainTrace& trace, const ParamVec& ref_mean,
                                       const std::optional<ParamVec>& ref_var,
                                       std::span<const std::size_t> steps);

struct TuneOptions {
  std::size_t block = 200;
  std::size_t max_blocks = 50;
  double tolerance = 0.05;
  // Length of the fresh block that confirms a hit.
  std::size_t check_block = 1000;
};

struct TuneResult {
  double step_size = 0.0;
  double achieved_rate = 0.0;
  std::size_t pilot_iterations = 0;
  bool converged = false;
  ParamVec final_theta;
  std::vector<double> step_history;
};

// Robbins-Monro on log step size: after block k,
// log h += k^-0.6 (rate - target). Leaves the sampler at the returned step.
TuneResult tune_step_size(Sampler& sampler, double target_rate, const ParamVec& theta0,
                          RngStream& rng, const TuneOptions& options = {});

}  // namespace mcaux
