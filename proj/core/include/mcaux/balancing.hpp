#pragma once

namespace mcaux {

// g(t) = sqrt(t) or g(t) = t / (1 + t); both satisfy g(t) = t g(1/t).
enum class BalancingFunction { sqrt, barker };

double balance(BalancingFunction g, double t);
// log g(exp(log_t)), stable for large |log_t|.
double log_balance(BalancingFunction g, double log_t);

// a(r) = min(1, r) or a(r) = r / (1 + r).
enum class AcceptanceRule { metropolis, barker };

double acceptance_probability(AcceptanceRule rule, double log_ratio);

const char* to_string(BalancingFunction g);
const char* to_string(AcceptanceRule rule);

}  // namespace mcaux
