#include "mcaux/rng.hpp"

#include <cmath>
#include <string>

#include "mcaux/errors.hpp"

namespace mcaux {
namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32),
                    0x6d636175u};
  return std::mt19937_64(seq);
}

std::uint64_t poisson_inversion(double mean, RngStream& rng) {
  const double p0 = std::exp(-mean);
  // Rounding can keep the partial cdf below u forever; redraw when the
  // search wanders far beyond any plausible count.
  const double give_up = mean + 40.0 * std::sqrt(mean) + 64.0;
  for (;;) {
    const double u = rng.uniform();
    double p = p0;
    double cdf = p0;
    std::uint64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (static_cast<double>(k) > give_up) break;
    }
    if (static_cast<double>(k) <= give_up) return k;
  }
}

// Hormann (1993) PTRS.
std::uint64_t poisson_ptrs(double mean, RngStream& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(seeded_engine(seed, stream_id)) {}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw PreconditionError("uniform_index: empty range");
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

std::uint64_t RngStream::poisson(double mean) { return sample_poisson(mean, *this); }

std::uint64_t sample_poisson(double mean, RngStream& rng) {
  if (!std::isfinite(mean) || mean < 0.0) {
    throw PreconditionError("sample_poisson: mean must be finite and >= 0, got " +
                            std::to_string(mean));
  }
  if (mean == 0.0) return 0;
  if (mean < 30.0) return poisson_inversion(mean, rng);
  return poisson_ptrs(mean, rng);
}

double poisson_log_pmf(std::uint64_t k, double mean) {
  if (mean == 0.0) {
    return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  const double kd = static_cast<double>(k);
  return kd * std::log(mean) - mean - std::lgamma(kd + 1.0);
}

}  // namespace mcaux
