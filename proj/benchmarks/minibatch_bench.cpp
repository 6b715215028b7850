#include <benchmark/benchmark.h>

#include <vector>

#include "mcaux/minibatch.hpp"
#include "mcaux/models/synthetic.hpp"
#include "mcaux/models/truncated_gaussian.hpp"
#include "mcaux/rng.hpp"

namespace {

using namespace mcaux;

models::TruncatedHeteroGaussian make_model(std::size_t n) {
  Eigen::VectorXd sigma(5);
  sigma << 1.0, 0.8, 0.6, 0.4, 0.2;
  RngStream rng(1, 0);
  return {models::synth_gaussian_data(n, sigma, rng), 1e-4, sigma, 3.0};
}

void BM_AliasDraw(benchmark::State& state) {
  RngStream rng(2, 0);
  std::vector<double> w(static_cast<std::size_t>(state.range(0)));
  for (auto& x : w) x = rng.uniform() + 0.01;
  const AliasTable table(w);
  for (auto _ : state) benchmark::DoNotOptimize(table.draw(rng));
}
BENCHMARK(BM_AliasDraw)->Arg(1 << 10)->Arg(1 << 20);

void BM_AliasBuild(benchmark::State& state) {
  RngStream rng(3, 0);
  std::vector<double> w(static_cast<std::size_t>(state.range(0)));
  for (auto& x : w) x = rng.uniform() + 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(AliasTable(w));
}
BENCHMARK(BM_AliasBuild)->Arg(1 << 10)->Arg(1 << 20);

// Thinned draw: cost scales with lambda + L, not N.
void BM_PoissonThinning(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)));
  const double total = model.total_bound();
  const PoissonMinibatcher batcher(model, 0.0005 * total * total);
  RngStream rng(4, 0);
  const ParamVec theta = ParamVec::Zero(5);
  for (auto _ : state) benchmark::DoNotOptimize(batcher.draw(theta, rng));
}
BENCHMARK(BM_PoissonThinning)->Arg(10'000)->Arg(100'000);

// One Poisson draw per datum.
void BM_PoissonNaive(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)));
  const double total = model.total_bound();
  const PoissonMinibatcher batcher(model, 0.0005 * total * total);
  RngStream rng(5, 0);
  const ParamVec theta = ParamVec::Zero(5);
  std::vector<int> counts(model.size());
  for (auto _ : state) {
    const std::vector<double> means = batcher.means(theta);
    for (std::size_t i = 0; i < means.size(); ++i) {
      counts[i] = static_cast<int>(sample_poisson(means[i], rng));
    }
    benchmark::DoNotOptimize(PoissonAuxState::from_dense(counts, batcher.lambda()));
  }
}
BENCHMARK(BM_PoissonNaive)->Arg(10'000)->Arg(100'000);

}  // namespace
