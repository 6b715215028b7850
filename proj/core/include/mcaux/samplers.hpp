#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mcaux/balancing.hpp"
#include "mcaux/errors.hpp"
#include "mcaux/minibatch.hpp"
#include "mcaux/model.hpp"
#include "mcaux/proposal.hpp"
#include "mcaux/rng.hpp"
#include "mcaux/types.hpp"

namespace mcaux {

enum class ProposalKind {
  random_walk,
  mala,
  barker,
  hmc,
  exchange,
  poisson_mh,
  tuna_mh,
  poisson_mala,
  poisson_barker,
  tuna_sgld,
};

const char* to_string(ProposalKind kind);

struct StepResult {
  ParamVec theta;
  bool accepted = false;
  // -inf when the proposal left the support.
  double log_accept_ratio = 0.0;
  // Sum of Poisson counts in the minibatch used for the ratio; 0 for
  // full-batch samplers.
  std::size_t batch_size = 0;
  ProposalKind kind = ProposalKind::random_walk;
};

// Draws u and accepts with a(exp(log_ratio)). On rejection the result holds
// a copy of current.
StepResult accept_or_reject(const ParamVec& current, ParamVec proposed, double log_ratio,
                            std::size_t batch_size, ProposalKind kind, RngStream& rng,
                            AcceptanceRule rule = AcceptanceRule::metropolis);

// Log density (and gradient) at the last visited point, so full-batch
// samplers pay one target evaluation per step.
struct TargetCache {
  ParamVec theta;
  double log_density = 0.0;
  ParamVec grad;
  bool valid = false;
  bool has_grad = false;
};

// ---- full-batch kernels ---------------------------------------------------

StepResult rwm_step(const LogTarget& target, const ParamVec& theta, double sigma, RngStream& rng,
                    TargetCache* cache = nullptr);
StepResult mala_step(const LogTarget& target, const ParamVec& theta, double sigma, RngStream& rng,
                     TargetCache* cache = nullptr);
StepResult barker_step(const LogTarget& target, const ParamVec& theta, double sigma,
                       RngStream& rng, TargetCache* cache = nullptr);
StepResult hmc_step(const LogTarget& target, const ParamVec& theta, double eps, int n_leapfrog,
                    RngStream& rng, TargetCache* cache = nullptr);

// log N(to; from + sigma^2/2 grad, sigma^2 I)
double mala_log_density(const ParamVec& from, const ParamVec& to, const ParamVec& grad,
                        double sigma);
// Componentwise skew proposal: z ~ N(0, sigma^2), keep the sign with
// probability 1 / (1 + exp(-grad_j z)).
ParamVec barker_sample(const ParamVec& from, const ParamVec& grad, double sigma, RngStream& rng);
// sum_j log[2 mu(d_j) / (1 + exp(-grad_j d_j))], d = to - from.
double barker_log_density(const ParamVec& from, const ParamVec& to, const ParamVec& grad,
                          double sigma);

// ---- exchange --------------------------------------------------------------

template <class Outcome>
double exchange_log_ratio(const DoublyIntractableModel<Outcome>& model, const ParamVec& from,
                          const ParamVec& to, const Outcome& simulated) {
  const Outcome& x = model.observed();
  return model.log_prior(to) - model.log_prior(from) + model.log_unnormalized(to, x) -
         model.log_unnormalized(from, x) + model.log_unnormalized(from, simulated) -
         model.log_unnormalized(to, simulated);
}

template <class Outcome>
StepResult exchange_step(const DoublyIntractableModel<Outcome>& model, const ParamVec& theta,
                         const Proposal& proposal, RngStream& rng,
                         AcceptanceRule rule = AcceptanceRule::metropolis) {
  ParamVec next = proposal.sample(theta, rng);
  if (std::isinf(model.log_prior(next))) {
    return {theta, false, -std::numeric_limits<double>::infinity(), 0, ProposalKind::exchange};
  }
  const Outcome w = model.simulate(next, rng);
  const double log_r = exchange_log_ratio(model, theta, next, w) +
                       proposal.log_density(next, theta) - proposal.log_density(theta, next);
  return accept_or_reject(theta, std::move(next), log_r, 0, ProposalKind::exchange, rng, rule);
}

// ---- Poisson minibatch kernels ----------------------------------------------

// sum_{i in S} s_i [log(lambda M_i/L + phi_i(to)) - log(lambda M_i/L + phi_i(from))]
double poisson_sparse_log_ratio(const PoissonMinibatcher& batcher, const ParamVec& from,
                                const ParamVec& to, const PoissonAuxState& aux);
// sum_{i in S} s_i [log(lambda c_i/C + phi_i(to, from)) - log(lambda c_i/C + phi_i(from, to))]
// with lambda taken from the aux state.
double tuna_sparse_log_ratio(const LipschitzFactorModel& model, const ParamVec& from,
                             const ParamVec& to, const PoissonAuxState& aux);
// Gradient of log[pi(theta) P_theta(aux)]: sum_{i in S} s_i grad phi_i / (lambda M_i/L + phi_i).
ParamVec minibatch_grad_log_proxy(const PoissonMinibatcher& batcher, const ParamVec& theta,
                                  const PoissonAuxState& aux);

StepResult poissonmh_step(const PoissonMinibatcher& batcher, const ParamVec& theta,
                          const Proposal& proposal, RngStream& rng,
                          AcceptanceRule rule = AcceptanceRule::metropolis);
StepResult tunamh_step(const TunaMinibatcher& batcher, const ParamVec& theta,
                       const Proposal& proposal, RngStream& rng,
                       AcceptanceRule rule = AcceptanceRule::metropolis);
// Poisson-MALA (g = sqrt) or Poisson-Barker (g = barker).
StepResult lb_poisson_step(const PoissonMinibatcher& batcher, const ParamVec& theta,
                           BalancingFunction g, double sigma, RngStream& rng,
                           AcceptanceRule rule = AcceptanceRule::metropolis);

struct SgldConfig {
  std::size_t batch = 1;
  double step = 0.1;
  // Clip on the norm of the minibatch gradient estimate; infinity = none.
  double clip = std::numeric_limits<double>::infinity();
};

// k distinct indices from [0, n), sorted.
std::vector<std::uint32_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                      RngStream& rng);
// -(eps^2/2) G min(1, clip/||G||), G = (N/K) sum_{i in batch} grad U_i(theta).
ParamVec sgld_drift(const LipschitzFactorModel& model, const ParamVec& theta,
                    std::span<const std::uint32_t> batch, const SgldConfig& config);

StepResult tuna_sgld_step(const TunaMinibatcher& batcher, const ParamVec& theta,
                          const SgldConfig& config, RngStream& rng,
                          AcceptanceRule rule = AcceptanceRule::metropolis);

// ---- stateful wrappers used by run_chain and the tuner ----------------------

class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual ProposalKind kind() const = 0;
  virtual StepResult step(const ParamVec& theta, RngStream& rng) = 0;
  virtual double step_size() const = 0;
  virtual void set_step_size(double value) = 0;
  std::string name() const { return to_string(kind()); }
};

class FullBatchSampler final : public Sampler {
 public:
  // kind must be random_walk, mala, barker or hmc. target must outlive this.
  FullBatchSampler(ProposalKind kind, const LogTarget& target, double step, int n_leapfrog = 10);

  ProposalKind kind() const override { return kind_; }
  StepResult step(const ParamVec& theta, RngStream& rng) override;
  double step_size() const override { return step_; }
  void set_step_size(double value) override;

 private:
  ProposalKind kind_;
  const LogTarget& target_;
  double step_;
  int n_leapfrog_;
  TargetCache cache_;
};

class PoissonMhSampler final : public Sampler {
 public:
  PoissonMhSampler(const PoissonMinibatcher& batcher, std::shared_ptr<Proposal> proposal);
  ProposalKind kind() const override { return ProposalKind::poisson_mh; }
  StepResult step(const ParamVec& theta, RngStream& rng) override {
    return poissonmh_step(batcher_, theta, *proposal_, rng);
  }
  double step_size() const override { return proposal_->scale(); }
  void set_step_size(double value) override { proposal_->set_scale(value); }

 private:
  const PoissonMinibatcher& batcher_;
  std::shared_ptr<Proposal> proposal_;
};

class TunaMhSampler final : public Sampler {
 public:
  TunaMhSampler(const TunaMinibatcher& batcher, std::shared_ptr<Proposal> proposal);
  ProposalKind kind() const override { return ProposalKind::tuna_mh; }
  StepResult step(const ParamVec& theta, RngStream& rng) override {
    return tunamh_step(batcher_, theta, *proposal_, rng);
  }
  double step_size() const override { return proposal_->scale(); }
  void set_step_size(double value) override { proposal_->set_scale(value); }

 private:
  const TunaMinibatcher& batcher_;
  std::shared_ptr<Proposal> proposal_;
};

class LbPoissonSampler final : public Sampler {
 public:
  LbPoissonSampler(const PoissonMinibatcher& batcher, BalancingFunction g, double sigma);
  ProposalKind kind() const override {
    return g_ == BalancingFunction::sqrt ? ProposalKind::poisson_mala
                                         : ProposalKind::poisson_barker;
  }
  StepResult step(const ParamVec& theta, RngStream& rng) override {
    return lb_poisson_step(batcher_, theta, g_, sigma_, rng);
  }
  double step_size() const override { return sigma_; }
  void set_step_size(double value) override;

 private:
  const PoissonMinibatcher& batcher_;
  BalancingFunction g_;
  double sigma_;
};

class TunaSgldSampler final : public Sampler {
 public:
  TunaSgldSampler(const TunaMinibatcher& batcher, SgldConfig config);
  ProposalKind kind() const override { return ProposalKind::tuna_sgld; }
  StepResult step(const ParamVec& theta, RngStream& rng) override {
    return tuna_sgld_step(batcher_, theta, config_, rng);
  }
  double step_size() const override { return config_.step; }
  void set_step_size(double value) override;
  const SgldConfig& config() const noexcept { return config_; }

 private:
  const TunaMinibatcher& batcher_;
  SgldConfig config_;
};

template <class Outcome>
class ExchangeSampler final : public Sampler {
 public:
  ExchangeSampler(const DoublyIntractableModel<Outcome>& model, std::shared_ptr<Proposal> proposal)
      : model_(model), proposal_(std::move(proposal)) {}
  ProposalKind kind() const override { return ProposalKind::exchange; }
  StepResult step(const ParamVec& theta, RngStream& rng) override {
    return exchange_step(model_, theta, *proposal_, rng);
  }
  double step_size() const override { return proposal_->scale(); }
  void set_step_size(double value) override { proposal_->set_scale(value); }

 private:
  const DoublyIntractableModel<Outcome>& model_;
  std::shared_ptr<Proposal> proposal_;
};

}  // namespace mcaux
