#pragma once

#include <memory>
#include <vector>

#include "mcaux/balancing.hpp"
#include "mcaux/minibatch.hpp"
#include "mcaux/models/finite_exp_family.hpp"
#include "mcaux/proposal.hpp"
#include "mcaux/samplers.hpp"
#include "mcaux/theory/kernel.hpp"

namespace mcaux::theory {

// Plain Metropolis-Hastings on a grid with an explicit log target.
class MetropolisScheme final : public FiniteScheme {
 public:
  MetropolisScheme(std::vector<double> log_target, GridProposal proposal);
  std::string name() const override { return "rwm"; }
  std::size_t num_states() const override { return log_target_.size(); }
  std::vector<double> labels() const override { return proposal_.grid(); }
  double log_target(std::size_t s) const override { return log_target_[s]; }
  std::vector<double> proposal_row(std::size_t s, const AuxPoint& w1) const override;
  double estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint&,
                             const AuxPoint&) const override {
    return log_target_[t] - log_target_[s];
  }

 private:
  std::vector<double> log_target_;
  GridProposal proposal_;
};

// Exchange algorithm: w2 is a simulated outcome at the proposed point.
class ExchangeScheme final : public FiniteScheme {
 public:
  ExchangeScheme(const models::FiniteExpFamily& model, GridProposal proposal);
  std::string name() const override { return "exchange"; }
  std::size_t num_states() const override { return model_.grid().size(); }
  std::vector<double> labels() const override { return model_.grid(); }
  double log_target(std::size_t s) const override;
  std::vector<double> proposal_row(std::size_t s, const AuxPoint& w1) const override;
  AuxLaw aux2_law(std::size_t s, std::size_t t, const AuxPoint& w1) const override;
  double aux2_log_prob(std::size_t s, std::size_t t, const AuxPoint& w1,
                       const AuxPoint& w2) const override;
  double estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint& w1,
                             const AuxPoint& w2) const override;

 private:
  const models::FiniteExpFamily& model_;
  GridProposal proposal_;
};

// PoissonMH on a one-dimensional grid: w1 empty, w2 the Poisson counts at s.
class PoissonMhScheme final : public FiniteScheme {
 public:
  PoissonMhScheme(const PoissonMinibatcher& batcher, GridProposal proposal,
                  double tail = kDefaultTail);
  std::string name() const override { return "poissonmh"; }
  std::size_t num_states() const override { return proposal_.grid().size(); }
  std::vector<double> labels() const override { return proposal_.grid(); }
  double log_target(std::size_t s) const override;
  std::vector<double> proposal_row(std::size_t s, const AuxPoint& w1) const override;
  AuxLaw aux2_law(std::size_t s, std::size_t t, const AuxPoint& w1) const override;
  double aux2_log_prob(std::size_t s, std::size_t t, const AuxPoint& w1,
                       const AuxPoint& w2) const override;
  double estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint& w1,
                             const AuxPoint& w2) const override;

 private:
  ParamVec point(std::size_t s) const;
  const PoissonMinibatcher& batcher_;
  GridProposal proposal_;
  double tail_;
};

// TunaMH on a one-dimensional grid: w2 the counts drawn for the pair (s, t).
class TunaMhScheme final : public FiniteScheme {
 public:
  TunaMhScheme(const TunaMinibatcher& batcher, GridProposal proposal, double tail = kDefaultTail);
  std::string name() const override { return "tunamh"; }
  std::size_t num_states() const override { return proposal_.grid().size(); }
  std::vector<double> labels() const override { return proposal_.grid(); }
  double log_target(std::size_t s) const override;
  std::vector<double> proposal_row(std::size_t s, const AuxPoint& w1) const override;
  AuxLaw aux2_law(std::size_t s, std::size_t t, const AuxPoint& w1) const override;
  double aux2_log_prob(std::size_t s, std::size_t t, const AuxPoint& w1,
                       const AuxPoint& w2) const override;
  double estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint& w1,
                             const AuxPoint& w2) const override;

 private:
  ParamVec point(std::size_t s) const;
  const TunaMinibatcher& batcher_;
  GridProposal proposal_;
  double tail_;
};

// Poisson-MALA / Poisson-Barker: w1 are the counts at s, reused as w2. The
// sampler's proposal density is restricted to the other grid points and
// renormalised.
class LbPoissonScheme final : public FiniteScheme {
 public:
  LbPoissonScheme(const PoissonMinibatcher& batcher, std::vector<double> grid, BalancingFunction g,
                  double sigma, double tail = kDefaultTail);
  std::string name() const override {
    return g_ == BalancingFunction::sqrt ? "poisson_mala" : "poisson_barker";
  }
  std::size_t num_states() const override { return grid_.size(); }
  std::vector<double> labels() const override { return grid_; }
  double log_target(std::size_t s) const override;
  AuxLaw aux1_law(std::size_t s) const override;
  double aux1_log_prob(std::size_t s, const AuxPoint& w1) const override;
  std::vector<double> proposal_row(std::size_t s, const AuxPoint& w1) const override;
  AuxLaw aux2_law(std::size_t s, std::size_t t, const AuxPoint& w1) const override;
  double aux2_log_prob(std::size_t s, std::size_t t, const AuxPoint& w1,
                       const AuxPoint& w2) const override;
  double estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint& w1,
                             const AuxPoint& w2) const override;

 private:
  ParamVec point(std::size_t s) const;
  const PoissonMinibatcher& batcher_;
  std::vector<double> grid_;
  BalancingFunction g_;
  double sigma_;
  double tail_;
};

// Tuna-SGLD: w1 the gradient subset, w2 the Tuna counts for (s, t).
class TunaSgldScheme final : public FiniteScheme {
 public:
  TunaSgldScheme(const TunaMinibatcher& batcher, std::vector<double> grid, SgldConfig config,
                 double tail = kDefaultTail);
  std::string name() const override { return "tuna_sgld"; }
  std::size_t num_states() const override { return grid_.size(); }
  std::vector<double> labels() const override { return grid_; }
  double log_target(std::size_t s) const override;
  AuxLaw aux1_law(std::size_t s) const override;
  double aux1_log_prob(std::size_t s, const AuxPoint& w1) const override;
  std::vector<double> proposal_row(std::size_t s, const AuxPoint& w1) const override;
  AuxLaw aux2_law(std::size_t s, std::size_t t, const AuxPoint& w1) const override;
  double aux2_log_prob(std::size_t s, std::size_t t, const AuxPoint& w1,
                       const AuxPoint& w2) const override;
  double estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint& w1,
                             const AuxPoint& w2) const override;

 private:
  ParamVec point(std::size_t s) const;
  const TunaMinibatcher& batcher_;
  std::vector<double> grid_;
  SgldConfig config_;
  double tail_;
  AuxLaw subsets_;
};

// Wraps a scheme and adds a fixed offset to every estimated log ratio.
// Used to show the detailed-balance check catches a broken sampler.
class CorruptedScheme final : public FiniteScheme {
 public:
  CorruptedScheme(const FiniteScheme& inner, double log_bias) : inner_(inner), bias_(log_bias) {}
  std::string name() const override { return inner_.name() + "_corrupted"; }
  std::size_t num_states() const override { return inner_.num_states(); }
  std::vector<double> labels() const override { return inner_.labels(); }
  double log_target(std::size_t s) const override { return inner_.log_target(s); }
  AuxLaw aux1_law(std::size_t s) const override { return inner_.aux1_law(s); }
  double aux1_log_prob(std::size_t s, const AuxPoint& w1) const override {
    return inner_.aux1_log_prob(s, w1);
  }
  std::vector<double> proposal_row(std::size_t s, const AuxPoint& w1) const override {
    return inner_.proposal_row(s, w1);
  }
  AuxLaw aux2_law(std::size_t s, std::size_t t, const AuxPoint& w1) const override {
    return inner_.aux2_law(s, t, w1);
  }
  double aux2_log_prob(std::size_t s, std::size_t t, const AuxPoint& w1,
                       const AuxPoint& w2) const override {
    return inner_.aux2_log_prob(s, t, w1, w2);
  }
  double estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint& w1,
                             const AuxPoint& w2) const override {
    return inner_.estimated_log_ratio(s, t, w1, w2) + (s < t ? bias_ : 0.0);
  }

 private:
  const FiniteScheme& inner_;
  double bias_;
};

}  // namespace mcaux::theory
