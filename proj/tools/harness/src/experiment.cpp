#include "mcaux/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "mcaux/harness/errors.hpp"
#include "mcaux/harness/mnist.hpp"
#include "mcaux/models/logistic.hpp"
#include "mcaux/models/robust_regression.hpp"
#include "mcaux/models/synthetic.hpp"
#include "mcaux/models/toys.hpp"
#include "mcaux/models/truncated_gaussian.hpp"
#include "mcaux/proposal.hpp"
#include "mcaux/theory/report.hpp"

namespace mcaux::harness {
namespace {

using nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ParamVec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const ParamVec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const ParamVec& v) { return {v.data(), v.data() + v.size()}; }

// Synthetic logistic truth: alternating signs, magnitudes from 1 to 0.5.
ParamVec logistic_truth(std::size_t d) {
  ParamVec t(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    const double mag = 1.0 - 0.5 * static_cast<double>(j) / static_cast<double>(std::max<std::size_t>(d - 1, 1));
    t[static_cast<Eigen::Index>(j)] = (j % 2 == 0 ? 1.0 : -1.0) * mag;
  }
  return t;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

void attach_oracle(Problem& p, const ExperimentConfig& config) {
  const std::filesystem::path cache =
      config.cache_dir.empty() ? std::filesystem::path("mcaux_cache") : std::filesystem::path(config.cache_dir);
  const OracleMoments o = rwm_oracle(p, config, config.reference_steps, cache);
  p.ref_mean = o.mean;
  p.ref_var = o.variance;
}

}  // namespace

std::uint64_t stream_key(const std::string& label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunSpec::label() const {
  std::ostringstream s;
  s << sampler << '/';
  if (tuned) {
    s << "rate=" << target_rate;
  } else if (!std::isnan(step)) {
    s << "step=" << step;
  } else {
    s << "fixed";
  }
  s << "/rep=" << replicate;
  return s.str();
}

Problem build_problem(const ExperimentConfig& config) {
  Problem p;
  p.kind = config.experiment;
  RngStream data_rng(config.seed, 0);
  switch (config.experiment) {
    case ExperimentKind::gaussian: {
      const ParamVec sigma = to_vec(resolved_sigma_diag(config));
      RowMatrix y = models::synth_gaussian_data(config.n, sigma, data_rng);
      auto model = std::make_shared<models::TruncatedHeteroGaussian>(std::move(y), config.beta,
                                                                     sigma, config.cube);
      p.ref_mean = model->posterior_mean();
      p.ref_var = model->posterior_variance();
      p.bounded = model;
      break;
    }
    case ExperimentKind::robust: {
      models::RegressionData data = models::synth_robust_data(config.n, config.d, data_rng);
      p.bounded = std::make_shared<models::RobustLinReg>(std::move(data.x), std::move(data.y),
                                                         config.dof, config.beta, config.radius);
      p.ref_mean = ParamVec::Ones(static_cast<Eigen::Index>(config.d));
      break;
    }
    case ExperimentKind::logistic: {
      RowMatrix train_x;
      Eigen::VectorXd train_y;
      if (config.data_source == "mnist") {
        MnistPair m = ingest_mnist(config.mnist_dir, config.digits, config.components);
        train_x = std::move(m.train_x);
        train_y = std::move(m.train_y);
        p.test_x = std::move(m.test_x);
        p.test_y = std::move(m.test_y);
      } else {
        const ParamVec truth = logistic_truth(config.d);
        models::RegressionData train = models::synth_logistic_data(config.n, truth, data_rng);
        models::RegressionData test = models::synth_logistic_data(config.holdout, truth, data_rng);
        train_x = std::move(train.x);
        train_y = std::move(train.y);
        p.test_x = std::move(test.x);
        p.test_y = std::move(test.y);
        p.ref_mean = truth;
      }
      p.lipschitz = std::make_shared<models::BayesLogistic>(std::move(train_x), std::move(train_y));
      break;
    }
    case ExperimentKind::exchange_toy: {
      auto family = std::make_shared<models::FiniteExpFamily>(models::exchange_toy());
      ParamVec mean(1), var(1);
      mean[0] = family->posterior_mean();
      var[0] = family->posterior_variance();
      p.ref_mean = mean;
      p.ref_var = var;
      p.family = family;
      p.dim = 1;
      return p;
    }
    case ExperimentKind::theory:
      throw ConfigError("the theory experiment has no sampling problem");
  }
  if (p.bounded) {
    p.dim = p.bounded->dim();
    p.target = std::make_shared<BoundedModelTarget>(*p.bounded);
    p.lambda = config.lambda.resolve(p.bounded->total_bound());
    p.poisson = std::make_shared<PoissonMinibatcher>(*p.bounded, p.lambda);
  } else {
    p.dim = p.lipschitz->dim();
    p.target = std::make_shared<LipschitzModelTarget>(*p.lipschitz);
    p.tuna = std::make_shared<TunaMinibatcher>(*p.lipschitz, config.chi);
  }
  if (config.reference == "oracle") attach_oracle(p, config);
  return p;
}

std::unique_ptr<Sampler> make_sampler(const Problem& p, const ExperimentConfig& config,
                                      const std::string& name, double step) {
  auto need = [&](bool ok, const char* promise) {
    if (!ok) {
      throw ConfigError("sampler '" + name + "' needs a " + promise + " model; experiment '" +
                        to_string(p.kind) + "' does not provide one");
    }
  };
  if (name == "rwm" || name == "mala" || name == "barker" || name == "hmc") {
    need(p.target != nullptr, "full-batch differentiable");
    const ProposalKind kind = name == "rwm"    ? ProposalKind::random_walk
                              : name == "mala" ? ProposalKind::mala
                              : name == "barker" ? ProposalKind::barker
                                                 : ProposalKind::hmc;
    return std::make_unique<FullBatchSampler>(kind, *p.target, step, config.hmc_leapfrog);
  }
  if (name == "poissonmh") {
    need(p.poisson != nullptr, "bounded-factor");
    return std::make_unique<PoissonMhSampler>(*p.poisson,
                                              std::make_shared<GaussianRandomWalk>(step));
  }
  if (name == "poisson_mala" || name == "poisson_barker") {
    need(p.poisson != nullptr, "bounded-factor");
    return std::make_unique<LbPoissonSampler>(
        *p.poisson, name == "poisson_mala" ? BalancingFunction::sqrt : BalancingFunction::barker,
        step);
  }
  if (name == "tunamh") {
    need(p.tuna != nullptr, "Lipschitz-factor");
    return std::make_unique<TunaMhSampler>(*p.tuna, std::make_shared<GaussianRandomWalk>(step));
  }
  if (name == "tuna_sgld") {
    need(p.tuna != nullptr, "Lipschitz-factor");
    SgldConfig sgld;
    sgld.batch = config.sgld_batch;
    sgld.step = step;
    if (config.grad_clip > 0.0) sgld.clip = config.grad_clip;
    return std::make_unique<TunaSgldSampler>(*p.tuna, sgld);
  }
  if (name == "exchange") {
    need(p.family != nullptr, "doubly-intractable");
    return std::make_unique<ExchangeSampler<int>>(
        *p.family, std::make_shared<GridProposal>(GridProposal::nearest_neighbour(p.family->grid())));
  }
  throw ConfigError("unknown sampler '" + name + "'");
}

ParamVec initial_state(const Problem& p, RngStream& rng) {
  ParamVec theta = ParamVec::Zero(static_cast<Eigen::Index>(p.dim));
  if (p.family) {
    theta[0] = p.family->grid()[p.family->grid().size() / 2];
    return theta;
  }
  if (p.lipschitz) return theta;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] = rng.normal();
    if (p.target->in_support(theta)) return theta;
  }
  throw ConfigError("could not draw an initial state inside the support");
}

std::vector<RunSpec> plan_runs(const ExperimentConfig& config) {
  std::vector<RunSpec> out;
  for (std::size_t rep = 0; rep < config.replicates; ++rep) {
    for (const std::string& name : config.samplers) {
      if (name == "exchange") {
        out.push_back({name, kNaN, kNaN, false, rep});
        continue;
      }
      for (double rate : config.target_rates) out.push_back({name, rate, config.initial_step, true, rep});
      for (double step : config.step_sizes) out.push_back({name, kNaN, step, false, rep});
    }
  }
  return out;
}

std::vector<std::size_t> record_steps(const ExperimentConfig& config, std::size_t steps) {
  if (config.record == "log") return log_spaced_steps(steps, config.points_per_decade);
  const std::size_t every = std::stoul(config.record.substr(6));
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t <= steps; t += every) out.push_back(t);
  if (out.back() != steps) out.push_back(steps);
  return out;
}

double holdout_accuracy(const Problem& p, const ChainTrace& trace, double burn_in,
                        std::size_t max_samples) {
  if (!p.has_holdout() || trace.rows() == 0) return kNaN;
  const std::size_t first = static_cast<std::size_t>(burn_in * static_cast<double>(trace.rows()));
  const std::size_t kept = trace.rows() - std::min(first, trace.rows() - 1);
  const std::size_t stride = std::max<std::size_t>(1, kept / std::max<std::size_t>(max_samples, 1));
  std::vector<ParamVec> samples;
  for (std::size_t t = trace.rows() - kept; t < trace.rows(); t += stride) samples.push_back(trace.row(t));
  return models::predictive_accuracy(p.test_x, p.test_y, samples);
}

RunOutcome execute_run(const Problem& p, const ExperimentConfig& config, const RunSpec& spec) {
  RunOutcome out;
  out.spec = spec;
  RngStream init_rng(config.seed, stream_key("init/" + std::to_string(spec.replicate)));
  const ParamVec theta0 = initial_state(p, init_rng);
  RngStream rng(config.seed, stream_key(spec.label()));

  double step = std::isnan(spec.step) ? 1.0 : spec.step;
  std::unique_ptr<Sampler> sampler = make_sampler(p, config, spec.sampler, step);
  if (spec.tuned) {
    out.tune = tune_step_size(*sampler, spec.target_rate, theta0, rng, config.tune);
  } else {
    out.tune.step_size = spec.step;
    out.tune.converged = true;
  }

  ChainOptions options;
  options.time_budget = config.time_budget;
  out.trace = run_chain(*sampler, theta0, config.iterations, rng, options);
  const std::size_t steps = out.trace.steps();
  out.record_steps = record_steps(config, steps);

  if (p.ref_mean) {
    out.curve = mse_vs_reference(out.trace, *p.ref_mean, p.ref_var, out.record_steps);
  }
  for (std::size_t t : out.record_steps) {
    if (p.has_holdout()) {
      const std::vector<ParamVec> one{out.trace.row(t)};
      out.holdout_at_step.push_back(models::predictive_accuracy(p.test_x, p.test_y, one));
    } else {
      out.holdout_at_step.push_back(kNaN);
    }
  }
  try {
    out.ess = ess_report(out.trace, config.burn_in);
  } catch (const PreconditionError&) {
  } catch (const UndefinedEssError&) {
  }
  out.predictive_accuracy = holdout_accuracy(p, out.trace, config.burn_in);
  return out;
}

OracleMoments rwm_oracle(const Problem& p, const ExperimentConfig& config, std::size_t steps,
                         const std::filesystem::path& cache_dir) {
  json key = to_json(config);
  for (const char* drop : {"samplers", "target_rates", "step_sizes", "iterations", "time_budget",
                           "replicates", "initial_step", "tune", "burn_in", "record",
                           "points_per_decade", "write_traces", "reference", "cache_dir"}) {
    key.erase(drop);
  }
  key["oracle_steps"] = steps;
  std::ostringstream name;
  name << "oracle_" << std::hex << std::setw(16) << std::setfill('0') << stream_key(key.dump())
       << ".json";
  const std::filesystem::path file = cache_dir / name.str();
  auto from_json = [](const json& j) {
    OracleMoments o;
    o.mean = to_vec(j.at("mean").get<std::vector<double>>());
    o.variance = to_vec(j.at("variance").get<std::vector<double>>());
    o.accuracy = j.at("accuracy").is_null() ? kNaN : j.at("accuracy").get<double>();
    o.step = j.at("step").get<double>();
    return o;
  };
  if (std::filesystem::exists(file)) {
    std::ifstream in(file);
    json j;
    in >> j;
    if (j.value("key", json()) == key) return from_json(j);
  }
  if (!p.target) throw ConfigError("oracle needs a full-batch target");

  RngStream init_rng(config.seed, stream_key("oracle/init"));
  RngStream rng(config.seed, stream_key("oracle/run"));
  const ParamVec theta0 = initial_state(p, init_rng);
  FullBatchSampler sampler(ProposalKind::random_walk, *p.target, config.initial_step);
  const TuneResult tuned = tune_step_size(sampler, 0.3, theta0, rng, config.tune);

  OracleMoments o;
  o.step = tuned.step_size;
  RunningMoments moments(p.dim);
  std::vector<ParamVec> thinned;
  const std::size_t burn = static_cast<std::size_t>(config.burn_in * static_cast<double>(steps));
  const std::size_t stride = std::max<std::size_t>(1, steps / 2000);
  ParamVec theta = tuned.final_theta;
  for (std::size_t t = 1; t <= steps; ++t) {
    theta = sampler.step(theta, rng).theta;
    if (t <= burn) continue;
    moments.add(theta);
    if (p.has_holdout() && t % stride == 0) thinned.push_back(theta);
  }
  o.mean = moments.mean();
  o.variance = moments.variance();
  o.accuracy = p.has_holdout() ? models::predictive_accuracy(p.test_x, p.test_y, thinned) : kNaN;

  std::filesystem::create_directories(cache_dir);
  json j{{"key", key}, {"mean", to_std(o.mean)}, {"variance", to_std(o.variance)},
         {"accuracy", std::isnan(o.accuracy) ? json() : json(o.accuracy)}, {"step", o.step}};
  std::ofstream(file) << j.dump(2) << '\n';
  return o;
}

const std::vector<std::string>& run_record_columns() {
  static const std::vector<std::string> cols{
      "experiment", "sampler", "target_rate", "replicate", "step",    "seconds",
      "accepted",   "batch_size", "mse_mean", "mse_var",   "holdout_acc"};
  return cols;
}

namespace {

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

const std::vector<std::string>& ess_columns() {
  static const std::vector<std::string> cols{
      "experiment",    "sampler",        "target_rate",     "replicate",   "step_size",
      "achieved_rate", "tune_converged", "pilot_iterations", "steps",      "seconds",
      "acceptance_rate", "mean_batch_size", "ess_min",     "ess_median",  "ess_max",
      "ess_per_sec_min", "ess_per_sec_median", "ess_per_sec_max", "holdout_acc", "aborted"};
  return cols;
}

void write_trace(const std::filesystem::path& path, const ChainTrace& trace) {
  std::ofstream out(path);
  out << "step,seconds,accepted,batch_size";
  for (std::size_t j = 0; j < trace.dim; ++j) out << ",theta_" << j;
  out << '\n' << std::setprecision(17);
  for (std::size_t t = 0; t < trace.rows(); ++t) {
    out << t << ',' << trace.seconds[t] << ',' << (t ? int(trace.accepted[t - 1]) : 0) << ','
        << (t ? trace.batch_size[t - 1] : 0);
    for (std::size_t j = 0; j < trace.dim; ++j) out << ',' << trace.values[t * trace.dim + j];
    out << '\n';
  }
}

ExperimentSummary run_theory(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  std::vector<std::string> names = config.samplers;
  if (names.size() == 1 && names[0] == "all") names.clear();
  for (const std::string& n : names) {
    const auto& known = theory::ToyLab::scheme_names();
    if (std::find(known.begin(), known.end(), n) == known.end()) {
      throw ConfigError("no theory toy for sampler '" + n + "'");
    }
  }
  const theory::CheckReport report = theory::run_default_suite(names);
  ExperimentSummary s;
  s.runs_csv = out_dir / "theory_report.csv";
  s.meta_json = out_dir / "theory_meta.json";
  std::ofstream csv(s.runs_csv);
  report.write_csv(csv);
  s.runs = report.rows().size();
  s.check_failures = report.failures();
  json meta{{"config", to_json(config)}, {"checks", s.runs}, {"failures", s.check_failures}};
  std::ofstream(s.meta_json) << meta.dump(2) << '\n';
  return s;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir) {
  validate(config);
  std::filesystem::create_directories(out_dir);
  if (config.experiment == ExperimentKind::theory) return run_theory(config, out_dir);

  ExperimentConfig resolved = config;
  if (resolved.cache_dir.empty()) resolved.cache_dir = (out_dir / "cache").string();
  const Problem problem = build_problem(resolved);
  // Fail on sampler/model mismatches before any run starts.
  for (const std::string& name : resolved.samplers) make_sampler(problem, resolved, name, 1.0);

  const std::string stem = to_string(config.experiment);
  ExperimentSummary s;
  s.runs_csv = out_dir / (stem + "_runs.csv");
  s.ess_csv = out_dir / (stem + "_ess.csv");
  s.meta_json = out_dir / (stem + "_meta.json");
  std::ofstream runs(s.runs_csv);
  std::ofstream ess(s.ess_csv);
  write_header(runs, run_record_columns());
  write_header(ess, ess_columns());

  json run_meta = json::array();
  for (const RunSpec& spec : plan_runs(resolved)) {
    const RunOutcome r = execute_run(problem, resolved, spec);
    ++s.runs;
    if (r.trace.aborted) ++s.aborted;
    const std::string rate = spec.tuned ? fmt(spec.target_rate) : "nan";
    for (std::size_t k = 0; k < r.record_steps.size(); ++k) {
      const std::size_t t = r.record_steps[k];
      const double mse_mean = r.curve.empty() ? kNaN : r.curve[k].mse_mean;
      const double mse_var = r.curve.empty() ? kNaN : r.curve[k].mse_var;
      runs << stem << ',' << spec.sampler << ',' << rate << ',' << spec.replicate << ',' << t
           << ',' << fmt(r.trace.seconds[t]) << ',' << (t ? int(r.trace.accepted[t - 1]) : 0)
           << ',' << (t ? r.trace.batch_size[t - 1] : 0) << ',' << fmt(mse_mean) << ','
           << fmt(mse_var) << ',' << fmt(r.holdout_at_step[k]) << '\n';
    }
    const EssReport e = r.ess.value_or(EssReport{{}, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN});
    ess << stem << ',' << spec.sampler << ',' << rate << ',' << spec.replicate << ','
        << fmt(r.tune.step_size) << ',' << fmt(spec.tuned ? r.tune.achieved_rate : kNaN) << ','
        << (r.tune.converged ? 1 : 0) << ',' << r.tune.pilot_iterations << ','
        << r.trace.steps() << ',' << fmt(r.trace.seconds.back()) << ','
        << fmt(r.trace.acceptance_rate()) << ',' << fmt(r.trace.mean_batch_size()) << ','
        << fmt(e.min) << ',' << fmt(e.median) << ',' << fmt(e.max) << ','
        << fmt(e.min_per_second) << ',' << fmt(e.median_per_second) << ','
        << fmt(e.max_per_second) << ',' << fmt(r.predictive_accuracy) << ','
        << (r.trace.aborted ? 1 : 0) << '\n';
    json m{{"run", spec.label()}, {"step_size", r.tune.step_size}, {"tuned", spec.tuned},
           {"tune_converged", r.tune.converged}, {"aborted", r.trace.aborted}};
    if (r.trace.aborted) m["error"] = r.trace.error;
    run_meta.push_back(m);
    if (config.write_traces) {
      std::string file = stem + "_trace_" + spec.label() + ".csv";
      std::replace(file.begin(), file.end(), '/', '_');
      write_trace(out_dir / file, r.trace);
    }
  }

  json meta{{"config", to_json(resolved)},
            {"burn_in", resolved.burn_in},
            {"lambda", problem.lambda},
            {"run_record_columns", run_record_columns()},
            {"ess_columns", ess_columns()},
            {"files", {{"runs", s.runs_csv.filename().string()},
                       {"ess", s.ess_csv.filename().string()}}},
            {"runs", run_meta}};
  if (problem.ref_mean) meta["reference_mean"] = to_std(*problem.ref_mean);
  if (problem.ref_var) meta["reference_variance"] = to_std(*problem.ref_var);
  std::ofstream(s.meta_json) << meta.dump(2) << '\n';
  return s;
}

}  // namespace mcaux::harness
