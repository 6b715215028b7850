#include "mcaux/theory/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcaux/errors.hpp"

namespace mcaux::theory {
namespace {

void check_law(const AuxLaw& law, double max_deficit, double& worst) {
  worst = std::max(worst, law.deficit);
  if (law.deficit > max_deficit) {
    throw EnumerationError("auxiliary enumeration misses mass " + std::to_string(law.deficit));
  }
}

void fill_diagonal(Eigen::MatrixXd& p) {
  for (Eigen::Index s = 0; s < p.rows(); ++s) {
    p(s, s) = 0.0;
    p(s, s) = 1.0 - p.row(s).sum();
  }
}

}  // namespace

AuxLaw FiniteScheme::aux1_law(std::size_t) const { return AuxLaw::point({}); }

double FiniteScheme::aux1_log_prob(std::size_t, const AuxPoint&) const { return 0.0; }

AuxLaw FiniteScheme::aux2_law(std::size_t, std::size_t, const AuxPoint&) const {
  return AuxLaw::point({});
}

double FiniteScheme::aux2_log_prob(std::size_t, std::size_t, const AuxPoint&,
                                   const AuxPoint&) const {
  return 0.0;
}

Eigen::VectorXd stationary_of(const FiniteScheme& scheme) {
  const std::size_t n = scheme.num_states();
  Eigen::VectorXd logp(static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) logp[static_cast<Eigen::Index>(s)] = scheme.log_target(s);
  const double top = logp.maxCoeff();
  Eigen::VectorXd p = (logp.array() - top).exp();
  return p / p.sum();
}

Eigen::MatrixXd ideal_proposal(const FiniteScheme& scheme, double max_deficit) {
  const auto n = static_cast<Eigen::Index>(scheme.num_states());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  double worst = 0.0;
  for (Eigen::Index s = 0; s < n; ++s) {
    const AuxLaw law = scheme.aux1_law(static_cast<std::size_t>(s));
    check_law(law, max_deficit, worst);
    for (const AuxAtom& w1 : law.atoms) {
      const std::vector<double> row = scheme.proposal_row(static_cast<std::size_t>(s), w1.value);
      for (Eigen::Index t = 0; t < n; ++t) q(s, t) += w1.prob * row[static_cast<std::size_t>(t)];
    }
  }
  return q;
}

KernelTriple build_kernels(const FiniteScheme& scheme, AcceptanceRule rule, double max_deficit) {
  const std::size_t n = scheme.num_states();
  const auto ni = static_cast<Eigen::Index>(n);
  KernelTriple out;
  const Eigen::VectorXd pi = stationary_of(scheme);
  const std::vector<double> labels = scheme.labels();
  std::vector<double> log_target(n);
  for (std::size_t s = 0; s < n; ++s) log_target[s] = scheme.log_target(s);

  Eigen::MatrixXd ideal = Eigen::MatrixXd::Zero(ni, ni);
  Eigen::MatrixXd mwg = Eigen::MatrixXd::Zero(ni, ni);
  Eigen::MatrixXd aux = Eigen::MatrixXd::Zero(ni, ni);

  const Eigen::MatrixXd q_ideal = ideal_proposal(scheme, max_deficit);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      const auto si = static_cast<Eigen::Index>(s);
      const auto ti = static_cast<Eigen::Index>(t);
      if (s == t || q_ideal(si, ti) <= 0.0) continue;
      const double log_r = log_target[t] - log_target[s] + std::log(q_ideal(ti, si)) -
                           std::log(q_ideal(si, ti));
      ideal(si, ti) = q_ideal(si, ti) * acceptance_probability(rule, log_r);
    }
  }

  for (std::size_t s = 0; s < n; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    const AuxLaw law1 = scheme.aux1_law(s);
    check_law(law1, max_deficit, out.max_deficit);
    for (const AuxAtom& w1 : law1.atoms) {
      const std::vector<double> row_s = scheme.proposal_row(s, w1.value);
      const double log_p1_s = scheme.aux1_log_prob(s, w1.value);
      for (std::size_t t = 0; t < n; ++t) {
        if (t == s || row_s[t] <= 0.0) continue;
        const auto ti = static_cast<Eigen::Index>(t);
        const std::vector<double> row_t = scheme.proposal_row(t, w1.value);
        const double log_q_ratio = std::log(row_t[s]) - std::log(row_s[t]);
        const double weight = w1.prob * row_s[t];

        const double log_exact = log_target[t] - log_target[s] +
                                 scheme.aux1_log_prob(t, w1.value) - log_p1_s;
        mwg(si, ti) += weight * acceptance_probability(rule, log_exact + log_q_ratio);

        const AuxLaw law2 = scheme.aux2_law(s, t, w1.value);
        check_law(law2, max_deficit, out.max_deficit);
        double accept = 0.0;
        for (const AuxAtom& w2 : law2.atoms) {
          const double log_r = scheme.estimated_log_ratio(s, t, w1.value, w2.value) + log_q_ratio;
          accept += w2.prob * acceptance_probability(rule, log_r);
        }
        aux(si, ti) += weight * accept;
      }
    }
  }
  fill_diagonal(ideal);
  fill_diagonal(mwg);
  fill_diagonal(aux);
  out.ideal = {std::move(ideal), pi, labels};
  out.mwg = {std::move(mwg), pi, labels};
  out.aux = {std::move(aux), pi, labels};
  return out;
}

}  // namespace mcaux::theory
