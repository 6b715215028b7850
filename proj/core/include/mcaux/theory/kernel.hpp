#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "mcaux/balancing.hpp"
#include "mcaux/theory/enumeration.hpp"

namespace mcaux::theory {

// Row-stochastic matrix on an enumerated state space.
struct KernelMatrix {
  Eigen::MatrixXd P;
  Eigen::VectorXd stationary;
  std::vector<double> labels;
};

// One auxiliary-variable sampler restricted to a finite state space.
// Proposals are q_{w1}(s, .) with w1 ~ P_s, the ratio is estimated from
// w2 ~ P_{s,t}(. | w1).
class FiniteScheme {
 public:
  virtual ~FiniteScheme() = default;

  virtual std::string name() const = 0;
  virtual std::size_t num_states() const = 0;
  virtual std::vector<double> labels() const = 0;
  // Exact unnormalised log target.
  virtual double log_target(std::size_t s) const = 0;

  virtual AuxLaw aux1_law(std::size_t s) const;
  virtual double aux1_log_prob(std::size_t s, const AuxPoint& w1) const;
  virtual std::vector<double> proposal_row(std::size_t s, const AuxPoint& w1) const = 0;
  virtual AuxLaw aux2_law(std::size_t s, std::size_t t, const AuxPoint& w1) const;
  virtual double aux2_log_prob(std::size_t s, std::size_t t, const AuxPoint& w1,
                               const AuxPoint& w2) const;
  // What the sampler believes log[Pi(t) P_{t,s}(w1, w2) / Pi(s) P_{s,t}(w1, w2)]
  // to be, proposal terms excluded.
  virtual double estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint& w1,
                                     const AuxPoint& w2) const = 0;
};

Eigen::VectorXd stationary_of(const FiniteScheme& scheme);

// Marginal proposal: sum_{w1} P_s(w1) q_{w1}(s, t).
Eigen::MatrixXd ideal_proposal(const FiniteScheme& scheme, double max_deficit = 1e-10);

struct KernelTriple {
  KernelMatrix ideal;
  KernelMatrix mwg;
  KernelMatrix aux;
  double max_deficit = 0.0;
};

// Exact sums over (w1, w2). Throws EnumerationError when any enumerated law
// misses more than max_deficit of its mass.
KernelTriple build_kernels(const FiniteScheme& scheme,
                           AcceptanceRule rule = AcceptanceRule::metropolis,
                           double max_deficit = 1e-10);

}  // namespace mcaux::theory
