#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mcaux::theory {

// A value of an auxiliary variable: Poisson counts, a subset, an outcome.
// Empty means "no auxiliary variable".
using AuxPoint = std::vector<int>;

struct AuxAtom {
  AuxPoint value;
  double prob = 0.0;
};

// Enumerated (possibly truncated) law. deficit is the mass left out.
struct AuxLaw {
  std::vector<AuxAtom> atoms;
  double deficit = 0.0;

  static AuxLaw point(AuxPoint value) { return {{{std::move(value), 1.0}}, 0.0}; }
};

constexpr double kDefaultTail = 1e-12;

// Smallest k with P(Poi(mean) > k) <= tail, the tail summed directly.
int poisson_truncation(double mean, double tail);

// Joint upper cut for every coordinate, large enough for each mean vector in
// mean_sets: coordinate tails are held to tail / N.
std::vector<int> common_truncation(std::span<const std::vector<double>> mean_sets,
                                   double tail = kDefaultTail);

// Product of independent Poissons on the box [0, cut_i]. Zero-probability
// atoms are dropped.
AuxLaw enumerate_product_poisson(std::span<const double> means, std::span<const int> cut);

// Every k-subset of {0..n-1}, uniform.
AuxLaw enumerate_subsets(int n, int k);

}  // namespace mcaux::theory
