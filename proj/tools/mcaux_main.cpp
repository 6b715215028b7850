#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mcaux/harness/config.hpp"
#include "mcaux/harness/errors.hpp"
#include "mcaux/harness/experiment.hpp"
#include "mcaux/harness/mnist.hpp"
#include "mcaux/models/synthetic.hpp"
#include "mcaux/theory/report.hpp"

namespace fs = std::filesystem;
using namespace mcaux;
using namespace mcaux::harness;

namespace {

constexpr int kConfigExit = 1;
constexpr int kDataExit = 2;
constexpr int kCheckExit = 3;

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("MCAUX_OUTPUT_DIR"); env && *env) return env;
  return "mcaux_out";
}

struct ConfigFlags {
  std::string path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> replicates;

  void attach(CLI::App& app, bool config_required) {
    auto* opt = app.add_option("config", path, "experiment config (JSON)");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    app.add_option("--set", sets, "override a top-level key, key=value");
    app.add_option("--seed", seed, "override the seed");
    app.add_option("--iterations", iterations, "override the iteration count");
    app.add_option("--replicates", replicates, "override the replicate count");
  }

  ExperimentConfig load() const {
    nlohmann::json doc = nlohmann::json::object();
    if (!path.empty()) {
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot open config " + path);
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
      }
    } else {
      doc["experiment"] = "theory";
      doc["samplers"] = {"all"};
    }
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
      apply_override(doc, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) doc["seed"] = *seed;
    if (iterations) doc["iterations"] = *iterations;
    if (replicates) doc["replicates"] = *replicates;
    ExperimentConfig config = parse_config(doc);
    validate(config);
    return config;
  }
};

int cmd_run(const ConfigFlags& flags, const std::string& out) {
  const ExperimentConfig config = flags.load();
  const ExperimentSummary s = run_experiment(config, output_dir(out));
  std::cout << "runs: " << s.runs << "  aborted: " << s.aborted << '\n'
            << "records: " << s.runs_csv.string() << '\n';
  if (!s.ess_csv.empty()) std::cout << "ess: " << s.ess_csv.string() << '\n';
  std::cout << "meta: " << s.meta_json.string() << '\n';
  if (s.check_failures > 0) {
    std::cout << s.check_failures << " theory checks failed\n";
    return kCheckExit;
  }
  return 0;
}

int cmd_tune(const ConfigFlags& flags) {
  const ExperimentConfig config = flags.load();
  if (config.experiment == ExperimentKind::theory) {
    throw ConfigError("tune needs a sampling experiment");
  }
  const Problem problem = build_problem(config);
  std::cout << "sampler,target_rate,step_size,achieved_rate,converged,pilot_iterations\n";
  for (const RunSpec& spec : plan_runs(config)) {
    if (!spec.tuned || spec.replicate != 0) continue;
    RngStream init_rng(config.seed, stream_key("init/0"));
    const ParamVec theta0 = initial_state(problem, init_rng);
    RngStream rng(config.seed, stream_key(spec.label()));
    auto sampler = make_sampler(problem, config, spec.sampler, config.initial_step);
    const TuneResult r = tune_step_size(*sampler, spec.target_rate, theta0, rng, config.tune);
    std::cout << spec.sampler << ',' << spec.target_rate << ',' << std::setprecision(8)
              << r.step_size << ',' << r.achieved_rate << ',' << (r.converged ? 1 : 0) << ','
              << r.pilot_iterations << '\n';
  }
  return 0;
}

int cmd_theory(const ConfigFlags& flags, const std::string& csv) {
  const ExperimentConfig config = flags.load();
  if (config.experiment != ExperimentKind::theory) {
    throw ConfigError("theory expects a config with experiment = theory");
  }
  std::vector<std::string> names = config.samplers;
  if (names.size() == 1 && names[0] == "all") names.clear();
  const theory::CheckReport report = theory::run_default_suite(names);
  report.write_text(std::cout);
  if (!csv.empty()) {
    std::ofstream out(csv);
    report.write_csv(out);
  }
  return report.all_passed() ? 0 : kCheckExit;
}

int cmd_ess(const std::string& path, double burn_in) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trace " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) header.push_back(cell);
  }
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].rfind("theta_", 0) == 0) cols.push_back(c);
  }
  if (cols.empty()) throw DataError(path + ": no theta_* columns");
  std::vector<std::vector<double>> series(cols.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw DataError(path + ": row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " fields");
    }
    for (std::size_t k = 0; k < cols.size(); ++k) series[k].push_back(std::stod(cells[cols[k]]));
  }
  std::cout << "column,ess\n";
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto first = static_cast<std::size_t>(burn_in * static_cast<double>(series[k].size()));
    const std::span<const double> kept(series[k].data() + first, series[k].size() - first);
    std::cout << header[cols[k]] << ',' << ess(kept) << '\n';
  }
  return 0;
}

int cmd_ingest(const std::string& dir, const std::vector<int>& digits, std::size_t components,
               const std::string& out) {
  if (digits.size() != 2 || digits[0] == digits[1]) {
    throw ConfigError("--digits expects two distinct digits");
  }
  const MnistPair m = ingest_mnist(dir, {digits[0], digits[1]}, components);
  const fs::path dest = output_dir(out);
  fs::create_directories(dest);
  const std::string stem = "mnist_" + std::to_string(digits[0]) + "v" + std::to_string(digits[1]);
  models::write_data_csv(dest / (stem + "_train.csv"), m.train_x, m.train_y);
  models::write_data_csv(dest / (stem + "_test.csv"), m.test_x, m.test_y);
  std::cout << "train: " << m.train_x.rows() << "\ntest: " << m.test_x.rows() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mcaux: minibatch MCMC experiments and exact-kernel checks"};
  app.require_subcommand(1);

  ConfigFlags run_flags, tune_flags, theory_flags;
  std::string run_out, theory_csv, ess_path, mnist_dir, mnist_out;
  double ess_burn_in = 0.1;
  std::vector<int> digits{3, 5};
  std::size_t components = 50;

  auto* run = app.add_subcommand("run", "tune, run and record an experiment");
  run_flags.attach(*run, true);
  run->add_option("--out", run_out, "output directory (default $MCAUX_OUTPUT_DIR or ./mcaux_out)");

  auto* tune = app.add_subcommand("tune", "tune step sizes only and print them");
  tune_flags.attach(*tune, true);

  auto* th = app.add_subcommand("theory", "run the exact-kernel check suite");
  theory_flags.attach(*th, false);
  th->add_option("--csv", theory_csv, "also write the report as CSV");

  auto* es = app.add_subcommand("ess", "effective sample size of a trace CSV");
  es->add_option("trace", ess_path, "trace CSV with theta_* columns")->required();
  es->add_option("--burn-in", ess_burn_in, "fraction discarded")->check(CLI::Range(0.0, 0.99));

  auto* ing = app.add_subcommand("ingest-mnist", "project an MNIST digit pair onto PCA components");
  ing->add_option("--dir", mnist_dir, "directory with the four IDX files")->required();
  ing->add_option("--digits", digits, "digit pair")->expected(2);
  ing->add_option("--components", components, "number of principal components");
  ing->add_option("--out", mnist_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigExit;
  }

  try {
    if (*run) return cmd_run(run_flags, run_out);
    if (*tune) return cmd_tune(tune_flags);
    if (*th) return cmd_theory(theory_flags, theory_csv);
    if (*es) return cmd_ess(ess_path, ess_burn_in);
    if (*ing) return cmd_ingest(mnist_dir, digits, components, mnist_out);
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataExit;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigExit;
  }
  return 0;
}
