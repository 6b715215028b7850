#include "mcaux/harness/config.hpp"

#include <fstream>
#include <set>

#include "mcaux/harness/errors.hpp"

namespace mcaux::harness {
namespace {

using nlohmann::json;

const std::set<std::string> kSamplers{"rwm",          "mala",           "barker",    "hmc",
                                      "poissonmh",    "poisson_mala",   "poisson_barker",
                                      "tunamh",       "tuna_sgld",      "exchange"};

ExperimentKind parse_kind(const std::string& name) {
  if (name == "gaussian") return ExperimentKind::gaussian;
  if (name == "robust") return ExperimentKind::robust;
  if (name == "logistic") return ExperimentKind::logistic;
  if (name == "exchange_toy") return ExperimentKind::exchange_toy;
  if (name == "theory") return ExperimentKind::theory;
  throw ConfigError("unknown experiment '" + name + "'");
}

template <class T>
void read(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void check_keys(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::gaussian: return "gaussian";
    case ExperimentKind::robust: return "robust";
    case ExperimentKind::logistic: return "logistic";
    case ExperimentKind::exchange_toy: return "exchange_toy";
    case ExperimentKind::theory: return "theory";
  }
  return "?";
}

double LambdaRule::resolve(double total_bound) const {
  return absolute ? value : value * total_bound * total_bound;
}

std::vector<double> resolved_sigma_diag(const ExperimentConfig& config) {
  if (!config.sigma_diag.empty()) return config.sigma_diag;
  std::vector<double> out(config.d);
  for (std::size_t j = 0; j < config.d; ++j) {
    out[j] = static_cast<double>(config.d - j) / static_cast<double>(config.d);
  }
  return out;
}

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc,
             {"experiment", "n", "d", "beta", "sigma_diag", "cube", "dof", "radius", "chi",
              "lambda", "sgld_batch", "grad_clip", "hmc_leapfrog", "data_source", "mnist_dir",
              "digits", "components", "holdout", "samplers", "target_rates", "step_sizes",
              "iterations", "time_budget", "replicates", "seed", "initial_step", "tune",
              "burn_in", "record", "points_per_decade", "write_traces", "reference",
              "reference_steps", "cache_dir"},
             "config");
  ExperimentConfig c;
  std::string kind = to_string(c.experiment);
  read(doc, "experiment", kind);
  c.experiment = parse_kind(kind);
  read(doc, "n", c.n);
  read(doc, "d", c.d);
  read(doc, "beta", c.beta);
  read(doc, "sigma_diag", c.sigma_diag);
  read(doc, "cube", c.cube);
  read(doc, "dof", c.dof);
  read(doc, "radius", c.radius);
  read(doc, "chi", c.chi);
  if (doc.contains("lambda")) {
    const json& l = doc.at("lambda");
    if (l.is_number()) {
      c.lambda = {true, l.get<double>()};
    } else {
      check_keys(l, {"rule", "value"}, "lambda");
      std::string rule = "l2_coefficient";
      read(l, "rule", rule);
      if (rule != "l2_coefficient" && rule != "absolute") {
        throw ConfigError("lambda.rule must be 'l2_coefficient' or 'absolute'");
      }
      c.lambda.absolute = rule == "absolute";
      read(l, "value", c.lambda.value);
    }
  }
  read(doc, "sgld_batch", c.sgld_batch);
  if (doc.contains("grad_clip") && doc.at("grad_clip").is_null()) {
    c.grad_clip = 0.0;
  } else {
    read(doc, "grad_clip", c.grad_clip);
  }
  read(doc, "hmc_leapfrog", c.hmc_leapfrog);
  read(doc, "data_source", c.data_source);
  read(doc, "mnist_dir", c.mnist_dir);
  read(doc, "digits", c.digits);
  read(doc, "components", c.components);
  read(doc, "holdout", c.holdout);
  read(doc, "samplers", c.samplers);
  read(doc, "target_rates", c.target_rates);
  read(doc, "step_sizes", c.step_sizes);
  read(doc, "iterations", c.iterations);
  read(doc, "time_budget", c.time_budget);
  read(doc, "replicates", c.replicates);
  read(doc, "seed", c.seed);
  read(doc, "initial_step", c.initial_step);
  if (doc.contains("tune")) {
    const json& t = doc.at("tune");
    check_keys(t, {"block", "max_blocks", "tolerance", "check_block"}, "tune");
    read(t, "block", c.tune.block);
    read(t, "max_blocks", c.tune.max_blocks);
    read(t, "tolerance", c.tune.tolerance);
    read(t, "check_block", c.tune.check_block);
  }
  read(doc, "burn_in", c.burn_in);
  read(doc, "record", c.record);
  read(doc, "points_per_decade", c.points_per_decade);
  read(doc, "write_traces", c.write_traces);
  read(doc, "reference", c.reference);
  read(doc, "reference_steps", c.reference_steps);
  read(doc, "cache_dir", c.cache_dir);
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.samplers.empty()) throw ConfigError("sampler list is empty");
  const bool theory = c.experiment == ExperimentKind::theory;
  if (!theory) {
    for (const std::string& s : c.samplers) {
      if (!kSamplers.count(s)) throw ConfigError("unknown sampler '" + s + "'");
    }
  }
  if (c.n == 0 || c.d == 0) throw ConfigError("n and d must be positive");
  if (!c.sigma_diag.empty() && c.sigma_diag.size() != c.d) {
    throw ConfigError("sigma_diag must have d entries");
  }
  for (double s : c.sigma_diag) {
    if (!(s > 0.0)) throw ConfigError("sigma_diag entries must be positive");
  }
  if (!(c.beta > 0.0) || !(c.cube > 0.0) || !(c.dof > 0.0) || !(c.radius > 0.0) ||
      !(c.chi > 0.0) || !(c.lambda.value > 0.0)) {
    throw ConfigError("beta, cube, dof, radius, chi and lambda must be positive");
  }
  if (c.grad_clip < 0.0) throw ConfigError("grad_clip must be >= 0 (0 disables)");
  if (c.hmc_leapfrog < 1) throw ConfigError("hmc_leapfrog must be >= 1");
  if (c.sgld_batch == 0 || c.sgld_batch > c.n) throw ConfigError("sgld_batch must lie in [1, n]");
  for (double r : c.target_rates) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("target rates must lie in (0, 1)");
  }
  for (double h : c.step_sizes) {
    if (!(h > 0.0)) throw ConfigError("step sizes must be positive");
  }
  if (!(c.initial_step > 0.0)) throw ConfigError("initial_step must be positive");
  if (!(c.burn_in >= 0.0 && c.burn_in < 1.0)) throw ConfigError("burn_in must lie in [0, 1)");
  if (c.time_budget < 0.0) throw ConfigError("time_budget must be >= 0");
  if (c.record != "log" && c.record.rfind("every:", 0) != 0) {
    throw ConfigError("record must be 'log' or 'every:K'");
  }
  if (c.record != "log") {
    try {
      if (std::stoul(c.record.substr(6)) == 0) throw ConfigError("record interval must be >= 1");
    } catch (const std::logic_error&) {
      throw ConfigError("record must be 'log' or 'every:K'");
    }
  }
  if (c.reference != "truth" && c.reference != "oracle") {
    throw ConfigError("reference must be 'truth' or 'oracle'");
  }
  if (c.data_source != "synthetic" && c.data_source != "mnist") {
    throw ConfigError("data_source must be 'synthetic' or 'mnist'");
  }
  if (c.tune.block == 0 || c.tune.max_blocks == 0 || c.tune.check_block == 0 ||
      !(c.tune.tolerance > 0.0)) {
    throw ConfigError("tune blocks and tolerance must be positive");
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json lambda{{"rule", c.lambda.absolute ? "absolute" : "l2_coefficient"},
              {"value", c.lambda.value}};
  json tune{{"block", c.tune.block},
            {"max_blocks", c.tune.max_blocks},
            {"tolerance", c.tune.tolerance},
            {"check_block", c.tune.check_block}};
  return json{{"experiment", to_string(c.experiment)},
              {"n", c.n},
              {"d", c.d},
              {"beta", c.beta},
              {"sigma_diag", resolved_sigma_diag(c)},
              {"cube", c.cube},
              {"dof", c.dof},
              {"radius", c.radius},
              {"chi", c.chi},
              {"lambda", lambda},
              {"sgld_batch", c.sgld_batch},
              {"grad_clip", c.grad_clip},
              {"hmc_leapfrog", c.hmc_leapfrog},
              {"data_source", c.data_source},
              {"mnist_dir", c.mnist_dir},
              {"digits", c.digits},
              {"components", c.components},
              {"holdout", c.holdout},
              {"samplers", c.samplers},
              {"target_rates", c.target_rates},
              {"step_sizes", c.step_sizes},
              {"iterations", c.iterations},
              {"time_budget", c.time_budget},
              {"replicates", c.replicates},
              {"seed", c.seed},
              {"initial_step", c.initial_step},
              {"tune", tune},
              {"burn_in", c.burn_in},
              {"record", c.record},
              {"points_per_decade", c.points_per_decade},
              {"write_traces", c.write_traces},
              {"reference", c.reference},
              {"reference_steps", c.reference_steps},
              {"cache_dir", c.cache_dir}};
}

void apply_override(json& doc, const std::string& key, const std::string& value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;
  }
  doc[key] = std::move(parsed);
}

}  // namespace mcaux::harness
