#include "mcaux/balancing.hpp"

#include <cmath>

#include "mcaux/errors.hpp"

namespace mcaux {
namespace {

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

double balance(BalancingFunction g, double t) {
  if (!(t >= 0.0)) throw PreconditionError("balance: t must be >= 0");
  switch (g) {
    case BalancingFunction::sqrt:
      return std::sqrt(t);
    case BalancingFunction::barker:
      return std::isinf(t) ? 1.0 : t / (1.0 + t);
  }
  return 0.0;
}

double log_balance(BalancingFunction g, double log_t) {
  switch (g) {
    case BalancingFunction::sqrt:
      return 0.5 * log_t;
    case BalancingFunction::barker:
      return -softplus(-log_t);
  }
  return 0.0;
}

double acceptance_probability(AcceptanceRule rule, double log_ratio) {
  if (std::isnan(log_ratio)) throw NumericError("acceptance ratio is NaN");
  switch (rule) {
    case AcceptanceRule::metropolis:
      return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
    case AcceptanceRule::barker:
      return std::exp(-softplus(-log_ratio));
  }
  return 0.0;
}

const char* to_string(BalancingFunction g) {
  return g == BalancingFunction::sqrt ? "sqrt" : "barker";
}

const char* to_string(AcceptanceRule rule) {
  return rule == AcceptanceRule::metropolis ? "metropolis" : "barker";
}

}  // namespace mcaux
