#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "mcaux/theory/kernel.hpp"

namespace mcaux::theory {

// max |pi_i P_ij - pi_j P_ji|
double detailed_balance_residual(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi);
inline double detailed_balance_residual(const KernelMatrix& k) {
  return detailed_balance_residual(k.P, k.stationary);
}

// 1 - max |eigenvalue| of P on mean-zero functions in L2(pi). Throws
// NotReversibleError when the detailed-balance residual exceeds tol.
double spectral_gap(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi, double tol = 1e-9);
inline double spectral_gap(const KernelMatrix& k) { return spectral_gap(k.P, k.stationary); }
// 1 - second largest eigenvalue (signed).
double right_spectral_gap(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi, double tol = 1e-9);

struct PeskunReport {
  // Largest off-diagonal excess p_aux - p_mwg and p_mwg - p_ideal.
  double aux_over_mwg = 0.0;
  double mwg_over_ideal = 0.0;
  // Largest off-diagonal |p_aux - p_mwg|.
  double aux_mwg_distance = 0.0;
  bool holds = false;
};

PeskunReport check_peskun(const KernelMatrix& aux, const KernelMatrix& mwg,
                          const KernelMatrix& ideal, double tol = 1e-12);

// KL(Poi(a) || Poi(b)) in closed form; PreconditionError unless a, b > 0.
double kl_poisson(double a, double b);
// The same by summing p log(p/q) until the remaining mass of Poi(a) is
// below tail.
double kl_poisson_series(double a, double b, double tail = 1e-16);
// TV(Poi(a), Poi(b)) by direct pmf summation.
double tv_poisson(double a, double b, double tail = 1e-16);
// Upper bound on TV between product laws: 1 - prod_i (1 - TV_i).
double tv_product_bound(std::span<const double> means_a, std::span<const double> means_b);

// Distances between the second auxiliary laws of (s, t) and (t, s), with
// the supremum over w1 drawn at s. tv is an upper bound: half L1 over the
// enumerated atoms plus the mass each law leaves outside them.
struct AuxDistance {
  double tv = 0.0;
  double kl_forward = 0.0;   // KL(P_{s,t} || P_{t,s})
  double kl_backward = 0.0;  // KL(P_{t,s} || P_{s,t})
  double kl_symmetric = 0.0;
};
AuxDistance aux_distance(const FiniteScheme& scheme, std::size_t s, std::size_t t);
// Entry (s, t) holds aux_distance(s, t).tv; zero diagonal.
Eigen::MatrixXd aux_tv_matrix(const FiniteScheme& scheme);

struct PointwiseReport {
  // Smallest p_aux - (1 - tv) p_mwg over off-diagonal pairs.
  double min_slack = 0.0;
  std::size_t worst_from = 0;
  std::size_t worst_to = 0;
  bool holds = false;
};
PointwiseReport check_pointwise_bound(const KernelTriple& kernels, const Eigen::MatrixXd& tv,
                                      double tol = 1e-12);

struct GapBoundReport {
  double gap_aux = 0.0;
  double gap_reference = 0.0;
  double factor = 0.0;
  // gap_aux - factor * gap_reference
  double margin = 0.0;
  bool holds = false;
};
GapBoundReport check_gap_bound(const KernelMatrix& aux, const KernelMatrix& reference,
                               double factor, double tol = 1e-12);

// e^{-1/e} exp(-L^2 / max(lambda + L, 2 lambda))
double poisson_gap_factor(double total_bound, double lambda);
// e^{-1/e} exp(-1 / (2 chi))
double tuna_gap_factor(double chi);
// Uniform comparison factors against P_MwG: 1 - sup tv, and
// e^{-1/e} exp(-sup over pairs of min(sym KL, KL fwd, KL bwd)).
double tv_comparison_factor(const FiniteScheme& scheme);
double kl_comparison_factor(const FiniteScheme& scheme);

// max over w1 of |E_{w2}[exp(estimated ratio)] - exact ratio|, where the
// exact ratio is Pi(t) P_t(w1) / (Pi(s) P_s(w1)).
double unbiasedness_residual(const FiniteScheme& scheme, std::size_t s, std::size_t t);

}  // namespace mcaux::theory
