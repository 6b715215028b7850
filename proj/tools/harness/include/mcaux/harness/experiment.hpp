#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcaux/chain.hpp"
#include "mcaux/diagnostics.hpp"
#include "mcaux/harness/config.hpp"
#include "mcaux/minibatch.hpp"
#include "mcaux/model.hpp"
#include "mcaux/models/finite_exp_family.hpp"
#include "mcaux/samplers.hpp"

namespace mcaux::harness {

// Model, full-batch target, minibatchers and reference quantities for one
// experiment config.
struct Problem {
  ExperimentKind kind = ExperimentKind::gaussian;
  std::size_t dim = 0;
  std::shared_ptr<const BoundedFactorModel> bounded;
  std::shared_ptr<const LipschitzFactorModel> lipschitz;
  std::shared_ptr<const models::FiniteExpFamily> family;
  std::shared_ptr<const LogTarget> target;
  std::shared_ptr<const PoissonMinibatcher> poisson;
  std::shared_ptr<const TunaMinibatcher> tuna;
  double lambda = 0.0;
  std::optional<ParamVec> ref_mean;
  std::optional<ParamVec> ref_var;
  // Logistic only.
  RowMatrix test_x;
  Eigen::VectorXd test_y;

  bool has_holdout() const { return test_x.rows() > 0; }
};

Problem build_problem(const ExperimentConfig& config);

// ConfigError when the sampler needs a promise the problem does not offer.
std::unique_ptr<Sampler> make_sampler(const Problem& problem, const ExperimentConfig& config,
                                      const std::string& name, double step);

// theta_0 for a replicate: N(0, I) redrawn into the support (zero for
// logistic, the middle grid point for the exchange toy).
ParamVec initial_state(const Problem& problem, RngStream& rng);

// Stable 64-bit FNV-1a, used to derive stream ids from run labels.
std::uint64_t stream_key(const std::string& label);

struct RunSpec {
  std::string sampler;
  // NaN for untuned runs.
  double target_rate = 0.0;
  double step = 0.0;
  bool tuned = false;
  std::size_t replicate = 0;

  std::string label() const;
};

struct RunOutcome {
  RunSpec spec;
  TuneResult tune;
  ChainTrace trace;
  std::vector<std::size_t> record_steps;
  std::vector<MsePoint> curve;
  // Accuracy of the state at each record step (NaN without a holdout set).
  std::vector<double> holdout_at_step;
  std::optional<EssReport> ess;
  // Posterior-predictive accuracy over the post-burn-in states.
  double predictive_accuracy = 0.0;
};

std::vector<RunSpec> plan_runs(const ExperimentConfig& config);
std::vector<std::size_t> record_steps(const ExperimentConfig& config, std::size_t steps);

RunOutcome execute_run(const Problem& problem, const ExperimentConfig& config,
                       const RunSpec& spec);

// Accuracy of the averaged predictive over the states after burn_in,
// thinned to at most max_samples.
double holdout_accuracy(const Problem& problem, const ChainTrace& trace, double burn_in,
                        std::size_t max_samples = 2000);

struct OracleMoments {
  ParamVec mean;
  ParamVec variance;
  double accuracy = 0.0;
  double step = 0.0;
};

// Long full-batch RWM run tuned to acceptance 0.3, cached on disk keyed by
// the model part of the config and the step count.
OracleMoments rwm_oracle(const Problem& problem, const ExperimentConfig& config,
                         std::size_t steps, const std::filesystem::path& cache_dir);

struct ExperimentSummary {
  std::filesystem::path runs_csv;
  std::filesystem::path ess_csv;
  std::filesystem::path meta_json;
  std::size_t runs = 0;
  std::size_t aborted = 0;
  std::size_t check_failures = 0;
};

// RunRecord header, in column order.
const std::vector<std::string>& run_record_columns();

// Writes <experiment>_runs.csv, <experiment>_ess.csv and
// <experiment>_meta.json (theory: <experiment>_report.csv) under out_dir.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir);

}  // namespace mcaux::harness
