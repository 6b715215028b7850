#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "mcaux/balancing.hpp"
#include "mcaux/minibatch.hpp"
#include "mcaux/models/toys.hpp"
#include "mcaux/theory/schemes.hpp"

namespace mcaux::theory {

struct CheckRow {
  std::string check;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

class CheckReport {
 public:
  void add(std::string check, double value, double bound, bool pass);
  // Appends the rows of another report.
  void merge(const CheckReport& other);

  const std::vector<CheckRow>& rows() const noexcept { return rows_; }
  bool all_passed() const;
  std::size_t failures() const;

  void write_text(std::ostream& out) const;
  // Header: check,value,bound,pass
  void write_csv(std::ostream& out) const;

 private:
  std::vector<CheckRow> rows_;
};

// The enumerable toy instances and the schemes built on them. Schemes hold
// references into the lab, so it must outlive them.
class ToyLab {
 public:
  ToyLab();

  const models::GridToy<models::TruncatedHeteroGaussian>& gaussian() const { return gaussian_; }
  const models::GridToy<models::BayesLogistic>& logistic() const { return logistic_; }
  const models::FiniteExpFamily& exchange_model() const { return exchange_; }

  std::unique_ptr<FiniteScheme> rwm() const;
  std::unique_ptr<FiniteScheme> exchange() const;
  // lambda defaults to L, the model's total bound.
  std::unique_ptr<FiniteScheme> poissonmh(double lambda = 0.0);
  std::unique_ptr<FiniteScheme> tunamh(double chi = 1.0);
  std::unique_ptr<FiniteScheme> lb_poisson(BalancingFunction g, double lambda = 0.0);
  std::unique_ptr<FiniteScheme> tuna_sgld(double chi = 1.0);

  // Default configuration by sampler name; PreconditionError if unknown.
  std::unique_ptr<FiniteScheme> scheme(const std::string& name);
  static const std::vector<std::string>& scheme_names();
  std::vector<std::unique_ptr<FiniteScheme>> all_schemes();

 private:
  const PoissonMinibatcher& poisson_batcher(double lambda);
  const TunaMinibatcher& tuna_batcher(double chi);

  models::GridToy<models::TruncatedHeteroGaussian> gaussian_;
  models::GridToy<models::BayesLogistic> logistic_;
  models::FiniteExpFamily exchange_;
  std::deque<PoissonMinibatcher> poisson_batchers_;
  std::deque<TunaMinibatcher> tuna_batchers_;
};

// Detailed balance of each named sampler's exact kernel (all when empty).
CheckReport reversibility_suite(ToyLab& lab, AcceptanceRule rule = AcceptanceRule::metropolis,
                                const std::vector<std::string>& names = {});
// Off-diagonal ordering aux <= mwg <= ideal, and the equality cases.
CheckReport peskun_suite(ToyLab& lab);
// Gap(P_aux) against the PoissonMH and TunaMH factors, the pointwise
// comparison and the uniform gap comparisons.
CheckReport gap_bound_suite(ToyLab& lab);
// |E[R] - exact ratio| at pairs drawn with the given seed.
CheckReport unbiasedness_suite(ToyLab& lab, std::uint64_t seed = 7, int pairs = 10);
// Poisson KL formula, the KL corner maximisation and the a(r) = r/(1+r) rule.
CheckReport divergence_suite(ToyLab& lab);

CheckReport run_default_suite(const std::vector<std::string>& names = {});

}  // namespace mcaux::theory
