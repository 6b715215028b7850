#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcaux/model.hpp"
#include "mcaux/rng.hpp"
#include "mcaux/types.hpp"

namespace mcaux {

// Vose alias table: O(N) build, O(1) categorical draw.
class AliasTable {
 public:
  // Throws InvalidWeightsError on negative, non-finite or all-zero weights.
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }
  std::size_t draw(RngStream& rng) const {
    const double u = rng.uniform() * static_cast<double>(prob_.size());
    const auto slot = static_cast<std::size_t>(u);
    return (u - static_cast<double>(slot)) < prob_[slot] ? slot : alias_[slot];
  }
  const std::vector<double>& prob() const noexcept { return prob_; }
  const std::vector<std::uint32_t>& alias() const noexcept { return alias_; }
  // Category probabilities implied by the table.
  std::vector<double> reconstructed() const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

inline AliasTable build_alias(std::span<const double> weights) { return AliasTable(weights); }

// Sparse Poisson counts: (index, count) pairs sorted by index, counts >= 1.
class PoissonAuxState {
 public:
  PoissonAuxState() = default;

  static PoissonAuxState from_dense(std::span<const int> counts, double lambda_used);
  // kept holds one entry per kept ball, in any order.
  static PoissonAuxState from_kept(std::vector<std::uint32_t> kept, std::uint64_t total_draws,
                                   double lambda_used);

  std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }
  // |S|, the number of distinct data touched.
  std::size_t distinct() const noexcept { return indices_.size(); }
  // Sum of counts.
  std::uint64_t kept_total() const noexcept { return kept_total_; }
  // Balls drawn before thinning (B).
  std::uint64_t total_draws() const noexcept { return total_draws_; }
  double lambda_used() const noexcept { return lambda_used_; }
  std::uint32_t count(std::size_t i) const;
  std::vector<int> dense(std::size_t n) const;

  bool operator==(const PoissonAuxState&) const = default;

 private:
  std::vector<std::uint32_t> indices_;
  std::vector<std::uint32_t> counts_;
  std::uint64_t kept_total_ = 0;
  std::uint64_t total_draws_ = 0;
  double lambda_used_ = 0.0;
};

// s_i ~ Poi(lambda M_i / L + phi_i(theta)) by thinning Poi(lambda + L) balls.
class PoissonMinibatcher {
 public:
  PoissonMinibatcher(const BoundedFactorModel& model, double lambda);

  const BoundedFactorModel& model() const noexcept { return *model_; }
  double lambda() const noexcept { return lambda_; }
  // lambda M_i / L
  double offset(std::size_t i) const { return offsets_[i]; }
  const std::vector<double>& offsets() const noexcept { return offsets_; }
  std::vector<double> means(const ParamVec& theta) const;

  PoissonAuxState draw(const ParamVec& theta, RngStream& rng) const;

 private:
  const BoundedFactorModel* model_;
  double lambda_;
  std::vector<double> offsets_;
  double total_rate_;
  AliasTable alias_;
};

// phi_i(theta, theta') = (U_i(theta') - U_i(theta)) / 2 + c_i M / 2, with
// values in [-1e-12, 0) snapped to 0; anything lower is a ModelContractError.
double tuna_phi(const LipschitzFactorModel& model, std::size_t i, const ParamVec& from,
                const ParamVec& to, double dist);

// s_i ~ Poi(lambda c_i / C + phi_i(theta, theta')), lambda = chi C^2 M^2.
class TunaMinibatcher {
 public:
  TunaMinibatcher(const LipschitzFactorModel& model, double chi);

  const LipschitzFactorModel& model() const noexcept { return *model_; }
  double chi() const noexcept { return chi_; }
  double lambda_for(const ParamVec& from, const ParamVec& to) const;
  std::vector<double> means(const ParamVec& from, const ParamVec& to) const;

  PoissonAuxState draw(const ParamVec& from, const ParamVec& to, RngStream& rng) const;

 private:
  const LipschitzFactorModel* model_;
  double chi_;
  AliasTable alias_;
};

// log prod_i Poi(s_i; mean_i), zero counts included.
double product_poisson_log_pmf(std::span<const double> means, const PoissonAuxState& state);
double aux_log_density_full(const PoissonMinibatcher& batcher, const ParamVec& theta,
                            const PoissonAuxState& state);
double aux_log_density_full(const TunaMinibatcher& batcher, const ParamVec& from,
                            const ParamVec& to, const PoissonAuxState& state);

}  // namespace mcaux
