#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcaux/diagnostics.hpp"

namespace mcaux::harness {

enum class ExperimentKind { gaussian, robust, logistic, exchange_toy, theory };

const char* to_string(ExperimentKind kind);

// lambda = value * L^2, or lambda = value.
struct LambdaRule {
  bool absolute = false;
  double value = 0.0005;

  double resolve(double total_bound) const;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::gaussian;

  // model
  std::size_t n = 10000;
  std::size_t d = 5;
  double beta = 1e-4;
  // Empty means (1, 1 - 1/d, ..., 1/d).
  std::vector<double> sigma_diag;
  double cube = 3.0;
  double dof = 4.0;
  double radius = 15.0;
  double chi = 1e-5;
  LambdaRule lambda;
  std::size_t sgld_batch = 20;
  // 0 disables clipping.
  double grad_clip = 2.0;
  int hmc_leapfrog = 10;

  // logistic data
  std::string data_source = "synthetic";  // or "mnist"
  std::string mnist_dir;
  std::array<int, 2> digits{3, 5};
  std::size_t components = 50;
  std::size_t holdout = 2000;

  // runs
  std::vector<std::string> samplers;
  std::vector<double> target_rates{0.25, 0.4, 0.55};
  // Fixed step sizes run in addition to (untuned) or instead of the rates.
  std::vector<double> step_sizes;
  std::size_t iterations = 10000;
  double time_budget = 0.0;
  std::size_t replicates = 1;
  std::uint64_t seed = 1;
  double initial_step = 0.1;
  TuneOptions tune;

  // output
  double burn_in = 0.1;
  // "log" or "every:K"
  std::string record = "log";
  std::size_t points_per_decade = 20;
  bool write_traces = false;
  // "truth" (closed form or generating parameter) or "oracle" (long RWM run).
  std::string reference = "truth";
  std::size_t reference_steps = 10000000;
  std::string cache_dir;
};

// Strict parse: unknown keys and wrong types raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
// Every field, defaults materialised.
nlohmann::json to_json(const ExperimentConfig& config);
// Overrides one top-level scalar; the value is parsed as JSON, falling back
// to a plain string.
void apply_override(nlohmann::json& doc, const std::string& key, const std::string& value);
// Consistency checks that need more than one field.
void validate(const ExperimentConfig& config);

std::vector<double> resolved_sigma_diag(const ExperimentConfig& config);

}  // namespace mcaux::harness
