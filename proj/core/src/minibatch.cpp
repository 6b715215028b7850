#include "mcaux/minibatch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcaux/errors.hpp"

namespace mcaux {

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw InvalidWeightsError("alias table: no weights");
  if (n > UINT32_MAX) throw InvalidWeightsError("alias table: too many weights");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidWeightsError("alias table: bad weight");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidWeightsError("alias table: all weights zero");

  prob_.assign(n, 1.0);
  alias_.resize(n);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    alias_[i] = static_cast<std::uint32_t>(i);
    scaled[i] = weights[i] / total * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    large.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  // Leftovers on either list are 1 up to rounding.
  for (std::uint32_t i : large) prob_[i] = 1.0;
  for (std::uint32_t i : small) prob_[i] = 1.0;
}

std::vector<double> AliasTable::reconstructed() const {
  const std::size_t n = prob_.size();
  std::vector<double> p(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] += prob_[i];
    p[alias_[i]] += 1.0 - prob_[i];
  }
  for (double& v : p) v /= static_cast<double>(n);
  return p;
}

PoissonAuxState PoissonAuxState::from_dense(std::span<const int> counts, double lambda_used) {
  PoissonAuxState state;
  state.lambda_used_ = lambda_used;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) throw PreconditionError("negative Poisson count");
    if (counts[i] == 0) continue;
    state.indices_.push_back(static_cast<std::uint32_t>(i));
    state.counts_.push_back(static_cast<std::uint32_t>(counts[i]));
    state.kept_total_ += static_cast<std::uint64_t>(counts[i]);
  }
  state.total_draws_ = state.kept_total_;
  return state;
}

PoissonAuxState PoissonAuxState::from_kept(std::vector<std::uint32_t> kept,
                                           std::uint64_t total_draws, double lambda_used) {
  PoissonAuxState state;
  state.lambda_used_ = lambda_used;
  state.total_draws_ = total_draws;
  state.kept_total_ = kept.size();
  std::sort(kept.begin(), kept.end());
  for (std::size_t k = 0; k < kept.size();) {
    std::size_t run = k + 1;
    while (run < kept.size() && kept[run] == kept[k]) ++run;
    state.indices_.push_back(kept[k]);
    state.counts_.push_back(static_cast<std::uint32_t>(run - k));
    k = run;
  }
  return state;
}

std::uint32_t PoissonAuxState::count(std::size_t i) const {
  const auto it = std::lower_bound(indices_.begin(), indices_.end(), i);
  if (it == indices_.end() || *it != i) return 0;
  return counts_[static_cast<std::size_t>(it - indices_.begin())];
}

std::vector<int> PoissonAuxState::dense(std::size_t n) const {
  std::vector<int> out(n, 0);
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] >= n) throw PreconditionError("aux index beyond dense length");
    out[indices_[k]] = static_cast<int>(counts_[k]);
  }
  return out;
}

namespace {

std::vector<double> poisson_offsets(const BoundedFactorModel& model, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw PreconditionError("PoissonMH lambda must be positive and finite");
  }
  std::vector<double> offsets(model.size());
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    offsets[i] = lambda * model.bound(i) / model.total_bound();
  }
  return offsets;
}

std::vector<double> poisson_rates(const BoundedFactorModel& model,
                                  const std::vector<double>& offsets) {
  std::vector<double> rates(offsets.size());
  for (std::size_t i = 0; i < rates.size(); ++i) rates[i] = offsets[i] + model.bound(i);
  return rates;
}

constexpr double kKeepSlack = 1e-12;

double checked_keep(double keep, std::size_t i) {
  if (!(keep >= -kKeepSlack && keep <= 1.0 + kKeepSlack)) {
    throw ModelContractError(i, "thinning probability " + std::to_string(keep) +
                                    " outside [0, 1]");
  }
  return keep;
}

}  // namespace

PoissonMinibatcher::PoissonMinibatcher(const BoundedFactorModel& model, double lambda)
    : model_(&model),
      lambda_(lambda),
      offsets_(poisson_offsets(model, lambda)),
      total_rate_(lambda + model.total_bound()),
      alias_(poisson_rates(model, offsets_)) {}

std::vector<double> PoissonMinibatcher::means(const ParamVec& theta) const {
  std::vector<double> m(offsets_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = offsets_[i] + model_->phi(i, theta);
  return m;
}

PoissonAuxState PoissonMinibatcher::draw(const ParamVec& theta, RngStream& rng) const {
  const std::uint64_t balls = sample_poisson(total_rate_, rng);
  std::vector<std::uint32_t> kept;
  kept.reserve(static_cast<std::size_t>(balls));
  for (std::uint64_t b = 0; b < balls; ++b) {
    const std::size_t i = alias_.draw(rng);
    const double keep = checked_keep(
        (offsets_[i] + model_->phi(i, theta)) / (offsets_[i] + model_->bound(i)), i);
    if (rng.uniform() < keep) kept.push_back(static_cast<std::uint32_t>(i));
  }
  return PoissonAuxState::from_kept(std::move(kept), balls, lambda_);
}

double tuna_phi(const LipschitzFactorModel& model, std::size_t i, const ParamVec& from,
                const ParamVec& to, double dist) {
  const double phi = 0.5 * (model.potential(i, to) - model.potential(i, from)) +
                     0.5 * model.lipschitz(i) * dist;
  if (phi >= 0.0) return phi;
  if (phi < -kKeepSlack) {
    throw ModelContractError(i, "Lipschitz promise violated: phi_i = " + std::to_string(phi));
  }
  return 0.0;
}

TunaMinibatcher::TunaMinibatcher(const LipschitzFactorModel& model, double chi)
    : model_(&model), chi_(chi), alias_(model.lipschitz()) {
  if (!(chi > 0.0) || !std::isfinite(chi)) {
    throw PreconditionError("TunaMH chi must be positive and finite");
  }
}

double TunaMinibatcher::lambda_for(const ParamVec& from, const ParamVec& to) const {
  const double c = model_->total_lipschitz();
  const double dist = model_->distance(from, to);
  return chi_ * c * c * dist * dist;
}

std::vector<double> TunaMinibatcher::means(const ParamVec& from, const ParamVec& to) const {
  const double c = model_->total_lipschitz();
  const double dist = model_->distance(from, to);
  const double lambda = chi_ * c * c * dist * dist;
  std::vector<double> m(model_->size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = lambda * model_->lipschitz(i) / c + tuna_phi(*model_, i, from, to, dist);
  }
  return m;
}

PoissonAuxState TunaMinibatcher::draw(const ParamVec& from, const ParamVec& to,
                                      RngStream& rng) const {
  const double c = model_->total_lipschitz();
  const double dist = model_->distance(from, to);
  const double lambda = chi_ * c * c * dist * dist;
  const std::uint64_t balls = sample_poisson(lambda + c * dist, rng);
  std::vector<std::uint32_t> kept;
  kept.reserve(static_cast<std::size_t>(balls));
  for (std::uint64_t b = 0; b < balls; ++b) {
    const std::size_t i = alias_.draw(rng);
    const double ci = model_->lipschitz(i);
    const double phi = tuna_phi(*model_, i, from, to, dist);
    const double keep = checked_keep((lambda * ci + c * phi) / (lambda * ci + c * ci * dist), i);
    if (rng.uniform() < keep) kept.push_back(static_cast<std::uint32_t>(i));
  }
  return PoissonAuxState::from_kept(std::move(kept), balls, lambda);
}

double product_poisson_log_pmf(std::span<const double> means, const PoissonAuxState& state) {
  double total = 0.0;
  for (double m : means) total -= m;
  const auto idx = state.indices();
  const auto cnt = state.counts();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= means.size()) throw PreconditionError("aux index beyond model size");
    const double m = means[idx[k]];
    total += poisson_log_pmf(cnt[k], m) + m;
  }
  return total;
}

double aux_log_density_full(const PoissonMinibatcher& batcher, const ParamVec& theta,
                            const PoissonAuxState& state) {
  return product_poisson_log_pmf(batcher.means(theta), state);
}

double aux_log_density_full(const TunaMinibatcher& batcher, const ParamVec& from,
                            const ParamVec& to, const PoissonAuxState& state) {
  return product_poisson_log_pmf(batcher.means(from, to), state);
}

}  // namespace mcaux
