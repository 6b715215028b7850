#pragma once

#include <vector>

#include "mcaux/model.hpp"

namespace mcaux::models {

// p_theta(w) proportional to exp(theta * stat(w)) on outcomes 0..m, with a
// prior on a finite grid of scalar theta. Small enough to enumerate, which
// is the whole point: it is an oracle for the exchange sampler.
class FiniteExpFamily final : public DoublyIntractableModel<int> {
 public:
  FiniteExpFamily(std::vector<double> grid, std::vector<double> prior_weights,
                  std::vector<double> statistic, int observed);

  double log_unnormalized(const ParamVec& theta, const int& w) const override;
  double log_prior(const ParamVec& theta) const override;
  int simulate(const ParamVec& theta, RngStream& rng) const override;
  const int& observed() const override { return observed_; }

  int num_outcomes() const noexcept { return static_cast<int>(statistic_.size()); }
  const std::vector<double>& grid() const noexcept { return grid_; }
  // Grid slot of theta, or -1 when theta is not a grid point.
  int grid_index(double theta) const;

  double log_partition(double theta) const;
  std::vector<double> outcome_pmf(double theta) const;
  std::vector<double> posterior() const;
  double posterior_mean() const;
  double posterior_variance() const;

 private:
  std::vector<double> grid_;
  std::vector<double> log_prior_;
  std::vector<double> statistic_;
  int observed_;
};

}  // namespace mcaux::models
