#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcaux/rng.hpp"
#include "mcaux/types.hpp"

namespace mcaux {

// Target proportional to exp(sum_i phi_i(theta)) with 0 <= phi_i <= M_i on
// the support.
class BoundedFactorModel {
 public:
  virtual ~BoundedFactorModel() = default;

  virtual std::size_t size() const = 0;
  virtual std::size_t dim() const = 0;
  virtual bool in_support(const ParamVec& theta) const = 0;
  virtual double phi(std::size_t i, const ParamVec& theta) const = 0;
  // out += scale * grad phi_i(theta)
  virtual void accumulate_grad_phi(std::size_t i, const ParamVec& theta, double scale,
                                   ParamVec& out) const = 0;
  // Uniform-ish draw from the support, used by promise probes.
  virtual ParamVec random_support_point(RngStream& rng) const = 0;

  virtual void phi_batch(std::span<const std::uint32_t> indices, const ParamVec& theta,
                         std::span<double> out) const;
  // Full sums; only baselines and oracles should need these.
  virtual double sum_phi(const ParamVec& theta) const;
  virtual ParamVec sum_grad_phi(const ParamVec& theta) const;

  ParamVec grad_phi(std::size_t i, const ParamVec& theta) const;
  const std::vector<double>& bounds() const noexcept { return bounds_; }
  double bound(std::size_t i) const { return bounds_[i]; }
  double total_bound() const noexcept { return total_bound_; }

 protected:
  // Throws ModelContractError on a non-positive or non-finite bound.
  void set_bounds(std::vector<double> bounds);

 private:
  std::vector<double> bounds_;
  double total_bound_ = 0.0;
};

// Target proportional to exp(-sum_i U_i(theta)) with
// |U_i(a) - U_i(b)| <= c_i * distance(a, b).
class LipschitzFactorModel {
 public:
  virtual ~LipschitzFactorModel() = default;

  virtual std::size_t size() const = 0;
  virtual std::size_t dim() const = 0;
  virtual bool in_support(const ParamVec&) const { return true; }
  virtual double potential(std::size_t i, const ParamVec& theta) const = 0;
  virtual void accumulate_grad_potential(std::size_t i, const ParamVec& theta, double scale,
                                         ParamVec& out) const = 0;
  virtual double distance(const ParamVec& a, const ParamVec& b) const = 0;
  virtual ParamVec random_support_point(RngStream& rng) const = 0;

  virtual void potential_batch(std::span<const std::uint32_t> indices, const ParamVec& theta,
                               std::span<double> out) const;
  virtual double sum_potential(const ParamVec& theta) const;
  virtual ParamVec sum_grad_potential(const ParamVec& theta) const;

  ParamVec grad_potential(std::size_t i, const ParamVec& theta) const;
  const std::vector<double>& lipschitz() const noexcept { return lipschitz_; }
  double lipschitz(std::size_t i) const { return lipschitz_[i]; }
  double total_lipschitz() const noexcept { return total_lipschitz_; }

 protected:
  void set_lipschitz(std::vector<double> constants);

 private:
  std::vector<double> lipschitz_;
  double total_lipschitz_ = 0.0;
};

// Likelihood known only up to a theta-dependent normaliser, with an exact
// simulator.
template <class Outcome>
class DoublyIntractableModel {
 public:
  using outcome_type = Outcome;
  virtual ~DoublyIntractableModel() = default;

  virtual double log_unnormalized(const ParamVec& theta, const Outcome& w) const = 0;
  // -inf outside the prior support.
  virtual double log_prior(const ParamVec& theta) const = 0;
  virtual Outcome simulate(const ParamVec& theta, RngStream& rng) const = 0;
  virtual const Outcome& observed() const = 0;
};

// Sum of phi_i (bounded) or minus sum of U_i (Lipschitz).
// Throws ZeroDensityError outside the support, NumericError on NaN/Inf.
double full_log_target(const BoundedFactorModel& model, const ParamVec& theta);
double full_log_target(const LipschitzFactorModel& model, const ParamVec& theta);
ParamVec full_grad_log_target(const BoundedFactorModel& model, const ParamVec& theta);
ParamVec full_grad_log_target(const LipschitzFactorModel& model, const ParamVec& theta);

// What the full-batch samplers consume.
class LogTarget {
 public:
  virtual ~LogTarget() = default;
  virtual std::size_t dim() const = 0;
  virtual bool in_support(const ParamVec&) const { return true; }
  virtual double log_density(const ParamVec& theta) const = 0;
  virtual ParamVec grad_log_density(const ParamVec& theta) const = 0;
};

// Adapters keep a reference: the model must outlive them.
class BoundedModelTarget final : public LogTarget {
 public:
  explicit BoundedModelTarget(const BoundedFactorModel& model) : model_(model) {}
  std::size_t dim() const override { return model_.dim(); }
  bool in_support(const ParamVec& theta) const override { return model_.in_support(theta); }
  double log_density(const ParamVec& theta) const override {
    return full_log_target(model_, theta);
  }
  ParamVec grad_log_density(const ParamVec& theta) const override {
    return full_grad_log_target(model_, theta);
  }

 private:
  const BoundedFactorModel& model_;
};

class LipschitzModelTarget final : public LogTarget {
 public:
  explicit LipschitzModelTarget(const LipschitzFactorModel& model) : model_(model) {}
  std::size_t dim() const override { return model_.dim(); }
  bool in_support(const ParamVec& theta) const override { return model_.in_support(theta); }
  double log_density(const ParamVec& theta) const override {
    return full_log_target(model_, theta);
  }
  ParamVec grad_log_density(const ParamVec& theta) const override {
    return full_grad_log_target(model_, theta);
  }

 private:
  const LipschitzFactorModel& model_;
};

struct BoundCheckReport {
  std::size_t probes = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  // Smallest slack seen; negative beyond -tolerance means a violation.
  double min_slack = 0.0;
  std::size_t worst_index = 0;
};

// 0 <= phi_i <= M_i at random support points.
BoundCheckReport bound_check(const BoundedFactorModel& model, std::size_t n_probes,
                             RngStream& rng, double tolerance = 1e-10);
// |U_i(b) - U_i(a)| <= c_i distance(a, b) at random support pairs.
BoundCheckReport bound_check(const LipschitzFactorModel& model, std::size_t n_probes,
                             RngStream& rng, double tolerance = 1e-10);

}  // namespace mcaux
