#include "mcaux/theory/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcaux/errors.hpp"

namespace mcaux::theory {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ParamVec scalar(double x) {
  ParamVec v(1);
  v[0] = x;
  return v;
}

std::vector<double> matrix_row(const GridProposal& q, std::size_t s) {
  const auto row = q.matrix().row(static_cast<Eigen::Index>(s));
  return std::vector<double>(row.begin(), row.end());
}

// exp-normalise log weights over t != s; entry s stays 0.
std::vector<double> normalise_off_diagonal(std::vector<double> log_w, std::size_t s) {
  double top = kNegInf;
  for (std::size_t t = 0; t < log_w.size(); ++t) {
    if (t != s) top = std::max(top, log_w[t]);
  }
  double total = 0.0;
  for (std::size_t t = 0; t < log_w.size(); ++t) {
    log_w[t] = t == s ? 0.0 : std::exp(log_w[t] - top);
    total += log_w[t];
  }
  for (double& w : log_w) w /= total;
  return log_w;
}

PoissonAuxState counts_state(const AuxPoint& w, double lambda) {
  return PoissonAuxState::from_dense(w, lambda);
}

}  // namespace

// ---- Metropolis -------------------------------------------------------------

MetropolisScheme::MetropolisScheme(std::vector<double> log_target, GridProposal proposal)
    : log_target_(std::move(log_target)), proposal_(std::move(proposal)) {
  if (log_target_.size() != proposal_.grid().size()) {
    throw PreconditionError("log target and grid differ in length");
  }
}

std::vector<double> MetropolisScheme::proposal_row(std::size_t s, const AuxPoint&) const {
  return matrix_row(proposal_, s);
}

// ---- exchange ---------------------------------------------------------------

ExchangeScheme::ExchangeScheme(const models::FiniteExpFamily& model, GridProposal proposal)
    : model_(model), proposal_(std::move(proposal)) {
  if (proposal_.grid() != model_.grid()) throw PreconditionError("proposal grid != model grid");
}

double ExchangeScheme::log_target(std::size_t s) const {
  const ParamVec theta = scalar(model_.grid()[s]);
  return model_.log_prior(theta) + model_.log_unnormalized(theta, model_.observed()) -
         model_.log_partition(theta[0]);
}

std::vector<double> ExchangeScheme::proposal_row(std::size_t s, const AuxPoint&) const {
  return matrix_row(proposal_, s);
}

AuxLaw ExchangeScheme::aux2_law(std::size_t, std::size_t t, const AuxPoint&) const {
  const std::vector<double> pmf = model_.outcome_pmf(model_.grid()[t]);
  AuxLaw law;
  for (std::size_t w = 0; w < pmf.size(); ++w) law.atoms.push_back({{static_cast<int>(w)}, pmf[w]});
  return law;
}

double ExchangeScheme::aux2_log_prob(std::size_t, std::size_t t, const AuxPoint&,
                                     const AuxPoint& w2) const {
  return std::log(model_.outcome_pmf(model_.grid()[t])[static_cast<std::size_t>(w2.at(0))]);
}

double ExchangeScheme::estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint&,
                                           const AuxPoint& w2) const {
  return exchange_log_ratio<int>(model_, scalar(model_.grid()[s]), scalar(model_.grid()[t]),
                                 w2.at(0));
}

// ---- PoissonMH --------------------------------------------------------------

PoissonMhScheme::PoissonMhScheme(const PoissonMinibatcher& batcher, GridProposal proposal,
                                 double tail)
    : batcher_(batcher), proposal_(std::move(proposal)), tail_(tail) {
  if (batcher_.model().dim() != 1) throw PreconditionError("grid schemes need a 1-d model");
}

ParamVec PoissonMhScheme::point(std::size_t s) const { return scalar(proposal_.grid()[s]); }

double PoissonMhScheme::log_target(std::size_t s) const {
  return full_log_target(batcher_.model(), point(s));
}

std::vector<double> PoissonMhScheme::proposal_row(std::size_t s, const AuxPoint&) const {
  return matrix_row(proposal_, s);
}

AuxLaw PoissonMhScheme::aux2_law(std::size_t s, std::size_t t, const AuxPoint&) const {
  const std::vector<std::vector<double>> means{batcher_.means(point(s)), batcher_.means(point(t))};
  return enumerate_product_poisson(means[0], common_truncation(means, tail_));
}

double PoissonMhScheme::aux2_log_prob(std::size_t s, std::size_t, const AuxPoint&,
                                      const AuxPoint& w2) const {
  return product_poisson_log_pmf(batcher_.means(point(s)), counts_state(w2, batcher_.lambda()));
}

double PoissonMhScheme::estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint&,
                                            const AuxPoint& w2) const {
  return poisson_sparse_log_ratio(batcher_, point(s), point(t),
                                  counts_state(w2, batcher_.lambda()));
}

// ---- TunaMH -----------------------------------------------------------------

TunaMhScheme::TunaMhScheme(const TunaMinibatcher& batcher, GridProposal proposal, double tail)
    : batcher_(batcher), proposal_(std::move(proposal)), tail_(tail) {
  if (batcher_.model().dim() != 1) throw PreconditionError("grid schemes need a 1-d model");
}

ParamVec TunaMhScheme::point(std::size_t s) const { return scalar(proposal_.grid()[s]); }

double TunaMhScheme::log_target(std::size_t s) const {
  return full_log_target(batcher_.model(), point(s));
}

std::vector<double> TunaMhScheme::proposal_row(std::size_t s, const AuxPoint&) const {
  return matrix_row(proposal_, s);
}

AuxLaw TunaMhScheme::aux2_law(std::size_t s, std::size_t t, const AuxPoint&) const {
  const std::vector<std::vector<double>> means{batcher_.means(point(s), point(t)),
                                               batcher_.means(point(t), point(s))};
  return enumerate_product_poisson(means[0], common_truncation(means, tail_));
}

double TunaMhScheme::aux2_log_prob(std::size_t s, std::size_t t, const AuxPoint&,
                                   const AuxPoint& w2) const {
  return product_poisson_log_pmf(batcher_.means(point(s), point(t)),
                                 counts_state(w2, batcher_.lambda_for(point(s), point(t))));
}

double TunaMhScheme::estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint&,
                                         const AuxPoint& w2) const {
  return tuna_sparse_log_ratio(batcher_.model(), point(s), point(t),
                               counts_state(w2, batcher_.lambda_for(point(s), point(t))));
}

// ---- locally balanced PoissonMH ----------------------------------------------

LbPoissonScheme::LbPoissonScheme(const PoissonMinibatcher& batcher, std::vector<double> grid,
                                 BalancingFunction g, double sigma, double tail)
    : batcher_(batcher), grid_(std::move(grid)), g_(g), sigma_(sigma), tail_(tail) {
  if (batcher_.model().dim() != 1) throw PreconditionError("grid schemes need a 1-d model");
}

ParamVec LbPoissonScheme::point(std::size_t s) const { return scalar(grid_[s]); }

double LbPoissonScheme::log_target(std::size_t s) const {
  return full_log_target(batcher_.model(), point(s));
}

AuxLaw LbPoissonScheme::aux1_law(std::size_t s) const {
  const std::vector<std::vector<double>> means{batcher_.means(point(s))};
  return enumerate_product_poisson(means[0], common_truncation(means, tail_));
}

double LbPoissonScheme::aux1_log_prob(std::size_t s, const AuxPoint& w1) const {
  return product_poisson_log_pmf(batcher_.means(point(s)), counts_state(w1, batcher_.lambda()));
}

std::vector<double> LbPoissonScheme::proposal_row(std::size_t s, const AuxPoint& w1) const {
  const ParamVec from = point(s);
  const ParamVec grad =
      minibatch_grad_log_proxy(batcher_, from, counts_state(w1, batcher_.lambda()));
  std::vector<double> log_w(grid_.size(), 0.0);
  for (std::size_t t = 0; t < grid_.size(); ++t) {
    if (t == s) continue;
    log_w[t] = g_ == BalancingFunction::sqrt ? mala_log_density(from, point(t), grad, sigma_)
                                             : barker_log_density(from, point(t), grad, sigma_);
  }
  return normalise_off_diagonal(std::move(log_w), s);
}

AuxLaw LbPoissonScheme::aux2_law(std::size_t, std::size_t, const AuxPoint& w1) const {
  return AuxLaw::point(w1);
}

double LbPoissonScheme::aux2_log_prob(std::size_t, std::size_t, const AuxPoint& w1,
                                      const AuxPoint& w2) const {
  return w1 == w2 ? 0.0 : kNegInf;
}

double LbPoissonScheme::estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint& w1,
                                            const AuxPoint&) const {
  return poisson_sparse_log_ratio(batcher_, point(s), point(t),
                                  counts_state(w1, batcher_.lambda()));
}

// ---- Tuna-SGLD --------------------------------------------------------------

TunaSgldScheme::TunaSgldScheme(const TunaMinibatcher& batcher, std::vector<double> grid,
                               SgldConfig config, double tail)
    : batcher_(batcher),
      grid_(std::move(grid)),
      config_(config),
      tail_(tail),
      subsets_(enumerate_subsets(static_cast<int>(batcher.model().size()),
                                 static_cast<int>(config.batch))) {
  if (batcher_.model().dim() != 1) throw PreconditionError("grid schemes need a 1-d model");
}

ParamVec TunaSgldScheme::point(std::size_t s) const { return scalar(grid_[s]); }

double TunaSgldScheme::log_target(std::size_t s) const {
  return full_log_target(batcher_.model(), point(s));
}

AuxLaw TunaSgldScheme::aux1_law(std::size_t) const { return subsets_; }

double TunaSgldScheme::aux1_log_prob(std::size_t, const AuxPoint&) const {
  return -std::log(static_cast<double>(subsets_.atoms.size()));
}

std::vector<double> TunaSgldScheme::proposal_row(std::size_t s, const AuxPoint& w1) const {
  const std::vector<std::uint32_t> batch(w1.begin(), w1.end());
  const ParamVec from = point(s);
  const ParamVec mean = from + sgld_drift(batcher_.model(), from, batch, config_);
  std::vector<double> log_w(grid_.size(), 0.0);
  for (std::size_t t = 0; t < grid_.size(); ++t) {
    if (t != s) log_w[t] = gaussian_log_density(point(t), mean, config_.step);
  }
  return normalise_off_diagonal(std::move(log_w), s);
}

AuxLaw TunaSgldScheme::aux2_law(std::size_t s, std::size_t t, const AuxPoint&) const {
  const std::vector<std::vector<double>> means{batcher_.means(point(s), point(t)),
                                               batcher_.means(point(t), point(s))};
  return enumerate_product_poisson(means[0], common_truncation(means, tail_));
}

double TunaSgldScheme::aux2_log_prob(std::size_t s, std::size_t t, const AuxPoint&,
                                     const AuxPoint& w2) const {
  return product_poisson_log_pmf(batcher_.means(point(s), point(t)),
                                 counts_state(w2, batcher_.lambda_for(point(s), point(t))));
}

double TunaSgldScheme::estimated_log_ratio(std::size_t s, std::size_t t, const AuxPoint&,
                                           const AuxPoint& w2) const {
  return tuna_sparse_log_ratio(batcher_.model(), point(s), point(t),
                               counts_state(w2, batcher_.lambda_for(point(s), point(t))));
}

}  // namespace mcaux::theory
