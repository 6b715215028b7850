#include "mcaux/theory/enumeration.hpp"

#include <algorithm>
#include <cmath>

#include "mcaux/errors.hpp"
#include "mcaux/rng.hpp"

namespace mcaux::theory {
namespace {

// pmf of Poi(mean) on 0..far, far well beyond any useful cut.
std::vector<double> poisson_pmf_table(double mean, int far) {
  std::vector<double> pmf(static_cast<std::size_t>(far) + 1);
  for (int k = 0; k <= far; ++k) {
    pmf[static_cast<std::size_t>(k)] = std::exp(poisson_log_pmf(static_cast<std::uint64_t>(k), mean));
  }
  return pmf;
}

int far_point(double mean) {
  return static_cast<int>(std::ceil(mean + 40.0 * std::sqrt(mean) + 60.0));
}

}  // namespace

int poisson_truncation(double mean, double tail) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw PreconditionError("bad Poisson mean");
  if (!(tail > 0.0)) throw PreconditionError("tail must be positive");
  if (mean == 0.0) return 0;
  const int far = far_point(mean);
  const std::vector<double> pmf = poisson_pmf_table(mean, far);
  // upper[k] = P(X > k), summed from the far end to keep small tails exact.
  double upper = 0.0;
  std::vector<double> tails(pmf.size());
  for (int k = far; k >= 0; --k) {
    tails[static_cast<std::size_t>(k)] = upper;
    upper += pmf[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k <= far; ++k) {
    if (tails[static_cast<std::size_t>(k)] <= tail) return k;
  }
  return far;
}

std::vector<int> common_truncation(std::span<const std::vector<double>> mean_sets, double tail) {
  if (mean_sets.empty()) return {};
  const std::size_t n = mean_sets.front().size();
  const double per_coord = tail / static_cast<double>(std::max<std::size_t>(n, 1));
  std::vector<int> cut(n, 0);
  for (const auto& means : mean_sets) {
    if (means.size() != n) throw PreconditionError("mean vectors differ in length");
    for (std::size_t i = 0; i < n; ++i) cut[i] = std::max(cut[i], poisson_truncation(means[i], per_coord));
  }
  return cut;
}

AuxLaw enumerate_product_poisson(std::span<const double> means, std::span<const int> cut) {
  const std::size_t n = means.size();
  if (cut.size() != n) throw PreconditionError("cut length != number of means");
  std::vector<std::vector<double>> pmf(n);
  double log_kept = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int far = std::max(cut[i], far_point(means[i]));
    pmf[i] = poisson_pmf_table(means[i], far);
    double beyond = 0.0;
    for (int k = far; k > cut[i]; --k) beyond += pmf[i][static_cast<std::size_t>(k)];
    log_kept += std::log1p(-beyond);
    pmf[i].resize(static_cast<std::size_t>(cut[i]) + 1);
  }

  AuxLaw law;
  law.deficit = -std::expm1(log_kept);
  AuxPoint counts(n, 0);
  for (;;) {
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= pmf[i][static_cast<std::size_t>(counts[i])];
    if (p > 0.0) law.atoms.push_back({counts, p});
    std::size_t i = 0;
    while (i < n && counts[i] == cut[i]) counts[i++] = 0;
    if (i == n) break;
    ++counts[i];
  }
  return law;
}

AuxLaw enumerate_subsets(int n, int k) {
  if (k < 0 || k > n) throw PreconditionError("subset size out of range");
  AuxLaw law;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) pick[static_cast<std::size_t>(j)] = j;
  for (;;) {
    law.atoms.push_back({pick, 0.0});
    int j = k - 1;
    while (j >= 0 && pick[static_cast<std::size_t>(j)] == n - k + j) --j;
    if (j < 0) break;
    ++pick[static_cast<std::size_t>(j)];
    for (int r = j + 1; r < k; ++r) pick[static_cast<std::size_t>(r)] = pick[static_cast<std::size_t>(r - 1)] + 1;
  }
  const double p = 1.0 / static_cast<double>(law.atoms.size());
  for (auto& atom : law.atoms) atom.prob = p;
  return law;
}

}  // namespace mcaux::theory
