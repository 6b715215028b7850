#include "mcaux/theory/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcaux/errors.hpp"
#include "mcaux/linalg.hpp"

namespace mcaux::theory {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Eigenvalues of D^{1/2} P D^{-1/2} with the stationary direction removed.
Eigen::VectorXd nontrivial_spectrum(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi,
                                    double tol) {
  if (P.rows() != P.cols() || P.rows() != pi.size()) {
    throw PreconditionError("kernel and stationary vector sizes differ");
  }
  if ((pi.array() <= 0.0).any()) throw PreconditionError("stationary law must be positive");
  const double residual = detailed_balance_residual(P, pi);
  if (residual > tol) {
    throw NotReversibleError("detailed-balance residual " + std::to_string(residual));
  }
  const Eigen::VectorXd root = pi.cwiseSqrt();
  Eigen::MatrixXd sym = root.asDiagonal() * P * root.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  sym -= root * root.transpose();
  const SymmetricEigen eig = jacobi_eigen(std::move(sym), 1e-8);
  // Deflation maps the stationary eigenvalue 1 to 0; drop one zero.
  std::vector<double> values(eig.values.begin(), eig.values.end());
  auto closest = std::min_element(values.begin(), values.end(),
                                  [](double a, double b) { return std::abs(a) < std::abs(b); });
  values.erase(closest);
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

double poisson_log_pmf_at(double mean, int k) {
  if (mean == 0.0) return k == 0 ? 0.0 : -kInf;
  return k * std::log(mean) - mean - std::lgamma(k + 1.0);
}

}  // namespace

double detailed_balance_residual(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi) {
  const Eigen::MatrixXd flow = pi.asDiagonal() * P;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

double spectral_gap(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi, double tol) {
  if (P.rows() == 1) return 1.0;
  return 1.0 - nontrivial_spectrum(P, pi, tol).cwiseAbs().maxCoeff();
}

double right_spectral_gap(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi, double tol) {
  if (P.rows() == 1) return 1.0;
  return 1.0 - nontrivial_spectrum(P, pi, tol).maxCoeff();
}

PeskunReport check_peskun(const KernelMatrix& aux, const KernelMatrix& mwg,
                          const KernelMatrix& ideal, double tol) {
  PeskunReport r;
  r.aux_over_mwg = -kInf;
  r.mwg_over_ideal = -kInf;
  for (Eigen::Index s = 0; s < aux.P.rows(); ++s) {
    for (Eigen::Index t = 0; t < aux.P.cols(); ++t) {
      if (s == t) continue;
      r.aux_over_mwg = std::max(r.aux_over_mwg, aux.P(s, t) - mwg.P(s, t));
      r.mwg_over_ideal = std::max(r.mwg_over_ideal, mwg.P(s, t) - ideal.P(s, t));
      r.aux_mwg_distance = std::max(r.aux_mwg_distance, std::abs(aux.P(s, t) - mwg.P(s, t)));
    }
  }
  r.holds = r.aux_over_mwg <= tol && r.mwg_over_ideal <= tol;
  return r;
}

double kl_poisson(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw PreconditionError("kl_poisson needs positive means");
  return a * std::log(a / b) + b - a;
}

double kl_poisson_series(double a, double b, double tail) {
  if (!(a > 0.0) || !(b > 0.0)) throw PreconditionError("kl_poisson needs positive means");
  const double log_ratio = std::log(a / b);
  double kl = 0.0;
  double mass = 0.0;
  for (int k = 0; 1.0 - mass > tail || k <= a; ++k) {
    const double p = std::exp(poisson_log_pmf_at(a, k));
    kl += p * (k * log_ratio - a + b);
    mass += p;
    if (k > 10 * a + 1000) break;
  }
  return kl;
}

double tv_poisson(double a, double b, double tail) {
  if (a < 0.0 || b < 0.0) throw PreconditionError("tv_poisson needs non-negative means");
  double l1 = 0.0;
  double mass_a = 0.0;
  double mass_b = 0.0;
  const double top = std::max(a, b);
  for (int k = 0; (1.0 - mass_a > tail || 1.0 - mass_b > tail) || k <= top; ++k) {
    const double p = std::exp(poisson_log_pmf_at(a, k));
    const double q = std::exp(poisson_log_pmf_at(b, k));
    l1 += std::abs(p - q);
    mass_a += p;
    mass_b += q;
    if (k > 10 * top + 1000) break;
  }
  l1 += std::max(0.0, 1.0 - mass_a) + std::max(0.0, 1.0 - mass_b);
  return std::min(1.0, 0.5 * l1);
}

double tv_product_bound(std::span<const double> means_a, std::span<const double> means_b) {
  if (means_a.size() != means_b.size()) throw PreconditionError("mean vectors differ in length");
  double overlap = 1.0;
  for (std::size_t i = 0; i < means_a.size(); ++i) {
    overlap *= 1.0 - tv_poisson(means_a[i], means_b[i]);
  }
  return 1.0 - overlap;
}

AuxDistance aux_distance(const FiniteScheme& scheme, std::size_t s, std::size_t t) {
  AuxDistance out;
  auto kl_and_cover = [&](std::size_t from, std::size_t to, const AuxPoint& w1, double& tv) {
    const AuxLaw law = scheme.aux2_law(from, to, w1);
    double l1 = 0.0;
    double covered = 0.0;
    double kl = 0.0;
    for (const AuxAtom& atom : law.atoms) {
      const double q = std::exp(scheme.aux2_log_prob(to, from, w1, atom.value));
      l1 += std::abs(atom.prob - q);
      covered += q;
      if (atom.prob > 0.0) kl += atom.prob * (std::log(atom.prob) - std::log(q));
    }
    tv = 0.5 * (l1 + law.deficit + std::max(0.0, 1.0 - covered));
    return kl;
  };
  for (const AuxAtom& w1 : scheme.aux1_law(s).atoms) {
    double tv_fwd = 0.0;
    double tv_bwd = 0.0;
    const double fwd = kl_and_cover(s, t, w1.value, tv_fwd);
    const double bwd = kl_and_cover(t, s, w1.value, tv_bwd);
    out.tv = std::max(out.tv, std::min({1.0, tv_fwd, tv_bwd}));
    out.kl_forward = std::max(out.kl_forward, fwd);
    out.kl_backward = std::max(out.kl_backward, bwd);
    out.kl_symmetric = std::max(out.kl_symmetric, 0.5 * (fwd + bwd));
  }
  return out;
}

Eigen::MatrixXd aux_tv_matrix(const FiniteScheme& scheme) {
  const auto n = static_cast<Eigen::Index>(scheme.num_states());
  Eigen::MatrixXd tv = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    for (Eigen::Index t = 0; t < n; ++t) {
      if (s != t) {
        tv(s, t) = aux_distance(scheme, static_cast<std::size_t>(s), static_cast<std::size_t>(t)).tv;
      }
    }
  }
  return tv;
}

PointwiseReport check_pointwise_bound(const KernelTriple& kernels, const Eigen::MatrixXd& tv,
                                      double tol) {
  PointwiseReport r;
  r.min_slack = kInf;
  const Eigen::MatrixXd& aux = kernels.aux.P;
  const Eigen::MatrixXd& mwg = kernels.mwg.P;
  for (Eigen::Index s = 0; s < aux.rows(); ++s) {
    for (Eigen::Index t = 0; t < aux.cols(); ++t) {
      if (s == t) continue;
      const double slack = aux(s, t) - (1.0 - tv(s, t)) * mwg(s, t);
      if (slack < r.min_slack) {
        r.min_slack = slack;
        r.worst_from = static_cast<std::size_t>(s);
        r.worst_to = static_cast<std::size_t>(t);
      }
    }
  }
  r.holds = r.min_slack >= -tol;
  return r;
}

GapBoundReport check_gap_bound(const KernelMatrix& aux, const KernelMatrix& reference,
                               double factor, double tol) {
  GapBoundReport r;
  r.gap_aux = spectral_gap(aux);
  r.gap_reference = spectral_gap(reference);
  r.factor = factor;
  r.margin = r.gap_aux - factor * r.gap_reference;
  r.holds = r.margin >= -tol;
  return r;
}

double poisson_gap_factor(double total_bound, double lambda) {
  if (!(total_bound > 0.0) || !(lambda > 0.0)) {
    throw PreconditionError("gap factor needs positive L and lambda");
  }
  const double l2 = total_bound * total_bound;
  return std::exp(-1.0 / std::exp(1.0)) * std::exp(-l2 / std::max(lambda + total_bound, 2 * lambda));
}

double tuna_gap_factor(double chi) {
  if (!(chi > 0.0)) throw PreconditionError("gap factor needs positive chi");
  return std::exp(-1.0 / std::exp(1.0)) * std::exp(-1.0 / (2 * chi));
}

double tv_comparison_factor(const FiniteScheme& scheme) {
  const Eigen::MatrixXd tv = aux_tv_matrix(scheme);
  return 1.0 - tv.maxCoeff();
}

double kl_comparison_factor(const FiniteScheme& scheme) {
  double worst = 0.0;
  const std::size_t n = scheme.num_states();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t) continue;
      const AuxDistance d = aux_distance(scheme, s, t);
      worst = std::max(worst, std::min({d.kl_symmetric, d.kl_forward, d.kl_backward}));
    }
  }
  return std::exp(-1.0 / std::exp(1.0)) * std::exp(-worst);
}

double unbiasedness_residual(const FiniteScheme& scheme, std::size_t s, std::size_t t) {
  const double log_target_ratio = scheme.log_target(t) - scheme.log_target(s);
  double worst = 0.0;
  for (const AuxAtom& w1 : scheme.aux1_law(s).atoms) {
    const double exact = std::exp(log_target_ratio + scheme.aux1_log_prob(t, w1.value) -
                                  scheme.aux1_log_prob(s, w1.value));
    double mean = 0.0;
    for (const AuxAtom& w2 : scheme.aux2_law(s, t, w1.value).atoms) {
      mean += w2.prob * std::exp(scheme.estimated_log_ratio(s, t, w1.value, w2.value));
    }
    worst = std::max(worst, std::abs(mean - exact));
  }
  return worst;
}

}  // namespace mcaux::theory
