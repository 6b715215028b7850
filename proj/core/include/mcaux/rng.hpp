#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace mcaux {

// One stream per chain. Same (seed, stream_id) gives the same draws.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1); safe to take the log of.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double normal() { return normal_(engine_); }
  std::uint64_t uniform_index(std::uint64_t n);
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Inversion below a mean of 30, PTRS transformed rejection above.
std::uint64_t sample_poisson(double mean, RngStream& rng);

double poisson_log_pmf(std::uint64_t k, double mean);

}  // namespace mcaux
