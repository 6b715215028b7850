#include "mcaux/chain.hpp"

#include <chrono>
#include <numeric>

#include "mcaux/errors.hpp"

namespace mcaux {

ParamVec ChainTrace::row(std::size_t t) const {
  if (t >= rows()) throw PreconditionError("trace row out of range");
  return Eigen::Map<const ParamVec>(values.data() + t * dim, static_cast<Eigen::Index>(dim));
}

std::vector<double> ChainTrace::column(std::size_t j, std::size_t first_row) const {
  if (j >= dim) throw PreconditionError("trace column out of range");
  std::vector<double> out;
  for (std::size_t t = first_row; t < rows(); ++t) out.push_back(values[t * dim + j]);
  return out;
}

double ChainTrace::acceptance_rate() const {
  if (accepted.empty()) return 0.0;
  const double hits = std::accumulate(accepted.begin(), accepted.end(), 0.0);
  return hits / static_cast<double>(accepted.size());
}

double ChainTrace::mean_batch_size() const {
  if (batch_size.empty()) return 0.0;
  const double total = std::accumulate(batch_size.begin(), batch_size.end(), 0.0);
  return total / static_cast<double>(batch_size.size());
}

ChainTrace run_chain(Sampler& sampler, const ParamVec& theta0, std::size_t steps, RngStream& rng,
                     const ChainOptions& options) {
  using clock = std::chrono::steady_clock;
  ChainTrace trace;
  trace.dim = static_cast<std::size_t>(theta0.size());
  const std::size_t stored = options.store_states ? steps + 1 : 2;
  trace.values.reserve(stored * trace.dim);
  trace.seconds.reserve(options.store_states ? steps + 1 : 2);
  trace.accepted.reserve(steps);
  trace.batch_size.reserve(steps);
  trace.values.insert(trace.values.end(), theta0.data(), theta0.data() + theta0.size());
  trace.seconds.push_back(0.0);

  // Only time spent inside step() counts; the observer is not timed.
  ParamVec theta = theta0;
  double elapsed = 0.0;
  for (std::size_t t = 1; t <= steps; ++t) {
    StepResult r;
    const auto start = clock::now();
    try {
      r = sampler.step(theta, rng);
    } catch (const Error& e) {
      trace.aborted = true;
      trace.error = "step " + std::to_string(t) + ": " + e.what();
      break;
    }
    elapsed += std::chrono::duration<double>(clock::now() - start).count();
    theta = std::move(r.theta);
    trace.accepted.push_back(r.accepted ? 1 : 0);
    trace.batch_size.push_back(r.batch_size);
    if (options.store_states) {
      trace.values.insert(trace.values.end(), theta.data(), theta.data() + theta.size());
      trace.seconds.push_back(elapsed);
    }
    if (options.observer) {
      r.theta = theta;
      options.observer(t, r);
    }
    if (options.time_budget > 0.0 && elapsed >= options.time_budget) break;
  }
  if (!options.store_states && trace.steps() > 0) {
    trace.values.insert(trace.values.end(), theta.data(), theta.data() + theta.size());
    trace.seconds.push_back(elapsed);
  }
  return trace;
}

}  // namespace mcaux
