#include "mcaux/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mcaux {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

StepResult rejected(const ParamVec& theta, std::size_t batch, ProposalKind kind) {
  return {theta, false, kNegInf, batch, kind};
}

ParamVec checked_grad(ParamVec g) {
  if (!g.allFinite()) throw NumericError("non-finite gradient");
  return g;
}

void refresh(const LogTarget& target, const ParamVec& theta, TargetCache& cache, bool need_grad) {
  if (!cache.valid || cache.theta.size() != theta.size() || cache.theta != theta) {
    cache.theta = theta;
    cache.log_density = target.log_density(theta);
    cache.valid = true;
    cache.has_grad = false;
  }
  if (need_grad && !cache.has_grad) {
    cache.grad = checked_grad(target.grad_log_density(theta));
    cache.has_grad = true;
  }
}

void remember(TargetCache& cache, const StepResult& r, double log_density, const ParamVec* grad) {
  if (!r.accepted) return;
  cache.theta = r.theta;
  cache.log_density = log_density;
  cache.valid = true;
  cache.has_grad = grad != nullptr;
  if (grad) cache.grad = *grad;
}

ParamVec standard_normal(Eigen::Index d, RngStream& rng) {
  ParamVec z(d);
  for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
  return z;
}

double log_sigmoid(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

// Promise slack shared with the minibatch module.
double snapped_phi(double phi, std::size_t i) {
  if (phi >= 0.0) return phi;
  if (phi < -1e-12) throw ModelContractError(i, "Lipschitz promise violated");
  return 0.0;
}

}  // namespace

const char* to_string(ProposalKind kind) {
  switch (kind) {
    case ProposalKind::random_walk: return "rwm";
    case ProposalKind::mala: return "mala";
    case ProposalKind::barker: return "barker";
    case ProposalKind::hmc: return "hmc";
    case ProposalKind::exchange: return "exchange";
    case ProposalKind::poisson_mh: return "poissonmh";
    case ProposalKind::tuna_mh: return "tunamh";
    case ProposalKind::poisson_mala: return "poisson_mala";
    case ProposalKind::poisson_barker: return "poisson_barker";
    case ProposalKind::tuna_sgld: return "tuna_sgld";
  }
  return "unknown";
}

StepResult accept_or_reject(const ParamVec& current, ParamVec proposed, double log_ratio,
                            std::size_t batch_size, ProposalKind kind, RngStream& rng,
                            AcceptanceRule rule) {
  const double a = acceptance_probability(rule, log_ratio);
  const double u = rng.uniform();
  if (u < a) return {std::move(proposed), true, log_ratio, batch_size, kind};
  return {current, false, log_ratio, batch_size, kind};
}

StepResult rwm_step(const LogTarget& target, const ParamVec& theta, double sigma, RngStream& rng,
                    TargetCache* cache) {
  TargetCache local;
  TargetCache& c = cache ? *cache : local;
  refresh(target, theta, c, false);
  ParamVec next = theta + sigma * standard_normal(theta.size(), rng);
  if (!target.in_support(next)) return rejected(theta, 0, ProposalKind::random_walk);
  const double lp = target.log_density(next);
  StepResult r = accept_or_reject(theta, std::move(next), lp - c.log_density, 0,
                                  ProposalKind::random_walk, rng);
  remember(c, r, lp, nullptr);
  return r;
}

double mala_log_density(const ParamVec& from, const ParamVec& to, const ParamVec& grad,
                        double sigma) {
  return gaussian_log_density(to, from + 0.5 * sigma * sigma * grad, sigma);
}

StepResult mala_step(const LogTarget& target, const ParamVec& theta, double sigma, RngStream& rng,
                     TargetCache* cache) {
  TargetCache local;
  TargetCache& c = cache ? *cache : local;
  refresh(target, theta, c, true);
  ParamVec next =
      theta + 0.5 * sigma * sigma * c.grad + sigma * standard_normal(theta.size(), rng);
  if (!target.in_support(next)) return rejected(theta, 0, ProposalKind::mala);
  const double lp = target.log_density(next);
  const ParamVec g = checked_grad(target.grad_log_density(next));
  const double log_r = lp - c.log_density + mala_log_density(next, theta, g, sigma) -
                       mala_log_density(theta, next, c.grad, sigma);
  StepResult r = accept_or_reject(theta, std::move(next), log_r, 0, ProposalKind::mala, rng);
  remember(c, r, lp, &g);
  return r;
}

ParamVec barker_sample(const ParamVec& from, const ParamVec& grad, double sigma, RngStream& rng) {
  ParamVec to(from.size());
  for (Eigen::Index j = 0; j < from.size(); ++j) {
    const double z = sigma * rng.normal();
    const double keep = std::exp(log_sigmoid(grad[j] * z));
    to[j] = rng.uniform() < keep ? from[j] + z : from[j] - z;
  }
  return to;
}

double barker_log_density(const ParamVec& from, const ParamVec& to, const ParamVec& grad,
                          double sigma) {
  const ParamVec delta = to - from;
  double total = gaussian_log_density(to, from, sigma);
  for (Eigen::Index j = 0; j < delta.size(); ++j) {
    total += std::numbers::ln2 + log_sigmoid(grad[j] * delta[j]);
  }
  return total;
}

StepResult barker_step(const LogTarget& target, const ParamVec& theta, double sigma,
                       RngStream& rng, TargetCache* cache) {
  TargetCache local;
  TargetCache& c = cache ? *cache : local;
  refresh(target, theta, c, true);
  ParamVec next = barker_sample(theta, c.grad, sigma, rng);
  if (!target.in_support(next)) return rejected(theta, 0, ProposalKind::barker);
  const double lp = target.log_density(next);
  const ParamVec g = checked_grad(target.grad_log_density(next));
  const double log_r = lp - c.log_density + barker_log_density(next, theta, g, sigma) -
                       barker_log_density(theta, next, c.grad, sigma);
  StepResult r = accept_or_reject(theta, std::move(next), log_r, 0, ProposalKind::barker, rng);
  remember(c, r, lp, &g);
  return r;
}

StepResult hmc_step(const LogTarget& target, const ParamVec& theta, double eps, int n_leapfrog,
                    RngStream& rng, TargetCache* cache) {
  if (n_leapfrog < 1) throw PreconditionError("hmc needs at least one leapfrog step");
  TargetCache local;
  TargetCache& c = cache ? *cache : local;
  refresh(target, theta, c, true);
  ParamVec p = standard_normal(theta.size(), rng);
  const double h0 = -c.log_density + 0.5 * p.squaredNorm();
  ParamVec q = theta;
  ParamVec g = c.grad;
  p += 0.5 * eps * g;
  for (int l = 0; l < n_leapfrog; ++l) {
    q += eps * p;
    if (!target.in_support(q)) return rejected(theta, 0, ProposalKind::hmc);
    g = checked_grad(target.grad_log_density(q));
    if (l + 1 < n_leapfrog) p += eps * g;
  }
  p += 0.5 * eps * g;
  const double lp = target.log_density(q);
  const double h1 = -lp + 0.5 * p.squaredNorm();
  StepResult r = accept_or_reject(theta, std::move(q), h0 - h1, 0, ProposalKind::hmc, rng);
  remember(c, r, lp, &g);
  return r;
}

double poisson_sparse_log_ratio(const PoissonMinibatcher& batcher, const ParamVec& from,
                                const ParamVec& to, const PoissonAuxState& aux) {
  const auto idx = aux.indices();
  const auto cnt = aux.counts();
  std::vector<double> phi_from(idx.size());
  std::vector<double> phi_to(idx.size());
  batcher.model().phi_batch(idx, from, phi_from);
  batcher.model().phi_batch(idx, to, phi_to);
  double total = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double off = batcher.offset(idx[k]);
    total += static_cast<double>(cnt[k]) * (std::log(off + phi_to[k]) - std::log(off + phi_from[k]));
  }
  return total;
}

double tuna_sparse_log_ratio(const LipschitzFactorModel& model, const ParamVec& from,
                             const ParamVec& to, const PoissonAuxState& aux) {
  const auto idx = aux.indices();
  const auto cnt = aux.counts();
  if (idx.empty()) return 0.0;
  std::vector<double> u_from(idx.size());
  std::vector<double> u_to(idx.size());
  model.potential_batch(idx, from, u_from);
  model.potential_batch(idx, to, u_to);
  const double c_total = model.total_lipschitz();
  const double dist = model.distance(from, to);
  const double lambda = aux.lambda_used();
  double total = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double ci = model.lipschitz(idx[k]);
    const double half_gap = 0.5 * ci * dist;
    const double fwd = snapped_phi(0.5 * (u_to[k] - u_from[k]) + half_gap, idx[k]);
    const double rev = snapped_phi(0.5 * (u_from[k] - u_to[k]) + half_gap, idx[k]);
    const double base = lambda * ci / c_total;
    total += static_cast<double>(cnt[k]) * (std::log(base + rev) - std::log(base + fwd));
  }
  return total;
}

ParamVec minibatch_grad_log_proxy(const PoissonMinibatcher& batcher, const ParamVec& theta,
                                  const PoissonAuxState& aux) {
  const auto idx = aux.indices();
  const auto cnt = aux.counts();
  std::vector<double> phi(idx.size());
  batcher.model().phi_batch(idx, theta, phi);
  ParamVec g = ParamVec::Zero(theta.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double mean = batcher.offset(idx[k]) + phi[k];
    batcher.model().accumulate_grad_phi(idx[k], theta, static_cast<double>(cnt[k]) / mean, g);
  }
  return g;
}

StepResult poissonmh_step(const PoissonMinibatcher& batcher, const ParamVec& theta,
                          const Proposal& proposal, RngStream& rng, AcceptanceRule rule) {
  ParamVec next = proposal.sample(theta, rng);
  if (!batcher.model().in_support(next)) return rejected(theta, 0, ProposalKind::poisson_mh);
  const PoissonAuxState aux = batcher.draw(theta, rng);
  double log_r = poisson_sparse_log_ratio(batcher, theta, next, aux);
  if (!proposal.symmetric()) {
    log_r += proposal.log_density(next, theta) - proposal.log_density(theta, next);
  }
  return accept_or_reject(theta, std::move(next), log_r, aux.kept_total(),
                          ProposalKind::poisson_mh, rng, rule);
}

StepResult tunamh_step(const TunaMinibatcher& batcher, const ParamVec& theta,
                       const Proposal& proposal, RngStream& rng, AcceptanceRule rule) {
  ParamVec next = proposal.sample(theta, rng);
  if (!batcher.model().in_support(next)) return rejected(theta, 0, ProposalKind::tuna_mh);
  const PoissonAuxState aux = batcher.draw(theta, next, rng);
  double log_r = tuna_sparse_log_ratio(batcher.model(), theta, next, aux);
  if (!proposal.symmetric()) {
    log_r += proposal.log_density(next, theta) - proposal.log_density(theta, next);
  }
  return accept_or_reject(theta, std::move(next), log_r, aux.kept_total(), ProposalKind::tuna_mh,
                          rng, rule);
}

StepResult lb_poisson_step(const PoissonMinibatcher& batcher, const ParamVec& theta,
                           BalancingFunction g, double sigma, RngStream& rng,
                           AcceptanceRule rule) {
  const ProposalKind kind =
      g == BalancingFunction::sqrt ? ProposalKind::poisson_mala : ProposalKind::poisson_barker;
  const PoissonAuxState aux = batcher.draw(theta, rng);
  const ParamVec grad = checked_grad(minibatch_grad_log_proxy(batcher, theta, aux));
  ParamVec next = g == BalancingFunction::sqrt
                      ? ParamVec(theta + 0.5 * sigma * sigma * grad +
                                 sigma * standard_normal(theta.size(), rng))
                      : barker_sample(theta, grad, sigma, rng);
  if (!batcher.model().in_support(next)) return rejected(theta, aux.kept_total(), kind);
  const ParamVec grad_next = checked_grad(minibatch_grad_log_proxy(batcher, next, aux));
  double log_r = poisson_sparse_log_ratio(batcher, theta, next, aux);
  if (g == BalancingFunction::sqrt) {
    log_r += mala_log_density(next, theta, grad_next, sigma) -
             mala_log_density(theta, next, grad, sigma);
  } else {
    log_r += barker_log_density(next, theta, grad_next, sigma) -
             barker_log_density(theta, next, grad, sigma);
  }
  return accept_or_reject(theta, std::move(next), log_r, aux.kept_total(), kind, rng, rule);
}

std::vector<std::uint32_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                      RngStream& rng) {
  if (k > n) throw PreconditionError("cannot draw more items than the population holds");
  // Floyd's algorithm; linear membership test is fine for the small k used.
  std::vector<std::uint32_t> chosen;
  chosen.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.uniform_index(j + 1));
    const bool taken = std::find(chosen.begin(), chosen.end(), t) != chosen.end();
    chosen.push_back(taken ? static_cast<std::uint32_t>(j) : t);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

ParamVec sgld_drift(const LipschitzFactorModel& model, const ParamVec& theta,
                    std::span<const std::uint32_t> batch, const SgldConfig& config) {
  ParamVec g = ParamVec::Zero(theta.size());
  const double weight = static_cast<double>(model.size()) / static_cast<double>(batch.size());
  for (std::uint32_t i : batch) model.accumulate_grad_potential(i, theta, weight, g);
  const double norm = g.norm();
  const double shrink = norm > config.clip ? config.clip / norm : 1.0;
  return -0.5 * config.step * config.step * shrink * g;
}

StepResult tuna_sgld_step(const TunaMinibatcher& batcher, const ParamVec& theta,
                          const SgldConfig& config, RngStream& rng, AcceptanceRule rule) {
  const LipschitzFactorModel& model = batcher.model();
  if (config.batch < 1 || config.batch > model.size()) {
    throw PreconditionError("sgld batch must be in [1, N]");
  }
  const std::vector<std::uint32_t> batch = sample_without_replacement(model.size(), config.batch, rng);
  const ParamVec drift = checked_grad(sgld_drift(model, theta, batch, config));
  ParamVec next = theta + drift + config.step * standard_normal(theta.size(), rng);
  if (!model.in_support(next)) return rejected(theta, 0, ProposalKind::tuna_sgld);
  const PoissonAuxState aux = batcher.draw(theta, next, rng);
  const ParamVec drift_back = checked_grad(sgld_drift(model, next, batch, config));
  const double log_r = tuna_sparse_log_ratio(model, theta, next, aux) +
                       gaussian_log_density(theta, next + drift_back, config.step) -
                       gaussian_log_density(next, theta + drift, config.step);
  return accept_or_reject(theta, std::move(next), log_r, aux.kept_total(), ProposalKind::tuna_sgld,
                          rng, rule);
}

FullBatchSampler::FullBatchSampler(ProposalKind kind, const LogTarget& target, double step,
                                   int n_leapfrog)
    : kind_(kind), target_(target), step_(step), n_leapfrog_(n_leapfrog) {
  if (kind != ProposalKind::random_walk && kind != ProposalKind::mala &&
      kind != ProposalKind::barker && kind != ProposalKind::hmc) {
    throw PreconditionError("FullBatchSampler: not a full-batch kernel");
  }
  if (n_leapfrog < 1) throw PreconditionError("hmc needs at least one leapfrog step");
  set_step_size(step);
}

void FullBatchSampler::set_step_size(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw PreconditionError("step size must be > 0");
  step_ = value;
}

StepResult FullBatchSampler::step(const ParamVec& theta, RngStream& rng) {
  switch (kind_) {
    case ProposalKind::random_walk: return rwm_step(target_, theta, step_, rng, &cache_);
    case ProposalKind::mala: return mala_step(target_, theta, step_, rng, &cache_);
    case ProposalKind::barker: return barker_step(target_, theta, step_, rng, &cache_);
    default: return hmc_step(target_, theta, step_, n_leapfrog_, rng, &cache_);
  }
}

PoissonMhSampler::PoissonMhSampler(const PoissonMinibatcher& batcher,
                                   std::shared_ptr<Proposal> proposal)
    : batcher_(batcher), proposal_(std::move(proposal)) {
  if (!proposal_) throw PreconditionError("null proposal");
}

TunaMhSampler::TunaMhSampler(const TunaMinibatcher& batcher, std::shared_ptr<Proposal> proposal)
    : batcher_(batcher), proposal_(std::move(proposal)) {
  if (!proposal_) throw PreconditionError("null proposal");
}

LbPoissonSampler::LbPoissonSampler(const PoissonMinibatcher& batcher, BalancingFunction g,
                                   double sigma)
    : batcher_(batcher), g_(g), sigma_(sigma) {
  set_step_size(sigma);
}

void LbPoissonSampler::set_step_size(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw PreconditionError("step size must be > 0");
  sigma_ = value;
}

TunaSgldSampler::TunaSgldSampler(const TunaMinibatcher& batcher, SgldConfig config)
    : batcher_(batcher), config_(config) {
  set_step_size(config.step);
  if (!(config.clip > 0.0)) throw PreconditionError("gradient clip must be > 0");
  if (config.batch < 1 || config.batch > batcher.model().size()) {
    throw PreconditionError("sgld batch must be in [1, N]");
  }
}

void TunaSgldSampler::set_step_size(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw PreconditionError("step size must be > 0");
  config_.step = value;
}

}  // namespace mcaux
