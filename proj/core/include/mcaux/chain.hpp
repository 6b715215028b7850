#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mcaux/rng.hpp"
#include "mcaux/samplers.hpp"
#include "mcaux/types.hpp"

namespace mcaux {

// Row 0 is theta_0; row t is the state after step t.
struct ChainTrace {
  std::size_t dim = 0;
  std::vector<double> values;            // (steps + 1) x dim, row-major
  std::vector<double> seconds;           // cumulative sampling time per row
  std::vector<std::uint8_t> accepted;    // per step
  std::vector<std::uint64_t> batch_size; // per step
  bool aborted = false;
  std::string error;

  std::size_t rows() const noexcept { return dim ? values.size() / dim : 0; }
  std::size_t steps() const noexcept { return accepted.size(); }
  ParamVec row(std::size_t t) const;
  std::vector<double> column(std::size_t j, std::size_t first_row = 0) const;
  double acceptance_rate() const;
  double mean_batch_size() const;
};

struct ChainOptions {
  // Keep every state; when false only theta_0 and the final state are stored
  // (step metadata is always kept).
  bool store_states = true;
  // Called after each step with (step index, result).
  std::function<void(std::size_t, const StepResult&)> observer;
  // Stop once this much sampling time has passed; 0 means no limit.
  double time_budget = 0.0;
};

// Any mcaux::Error thrown by a step stops the run and flags the trace.
ChainTrace run_chain(Sampler& sampler, const ParamVec& theta0, std::size_t steps, RngStream& rng,
                     const ChainOptions& options = {});

}  // namespace mcaux
