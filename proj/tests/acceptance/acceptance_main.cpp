// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 when any
// criterion fails. Pass criterion ids (A1 .. A11) to run a subset.

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mcaux/chain.hpp"
#include "mcaux/diagnostics.hpp"
#include "mcaux/minibatch.hpp"
#include "mcaux/models/finite_exp_family.hpp"
#include "mcaux/models/logistic.hpp"
#include "mcaux/models/robust_regression.hpp"
#include "mcaux/models/synthetic.hpp"
#include "mcaux/models/toys.hpp"
#include "mcaux/models/truncated_gaussian.hpp"
#include "mcaux/samplers.hpp"
#include "mcaux/theory/report.hpp"
#include "test_support.hpp"

namespace {

using namespace mcaux;
using mcaux::testing::vec;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
};

std::string fmt(double x, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

void info(const std::string& line) { std::cout << "    " << line << '\n' << std::flush; }

Outcome from_report(const theory::CheckReport& report) {
  std::ostringstream s;
  s << report.rows().size() - report.failures() << '/' << report.rows().size() << " checks";
  for (const auto& row : report.rows()) {
    if (!row.pass) s << "; failed " << row.check << " (" << row.value << " vs " << row.bound << ')';
  }
  return {report.all_passed(), s.str()};
}

// ---- exact kernels ----------------------------------------------------------

Outcome reversibility() {
  const auto start = std::chrono::steady_clock::now();
  theory::ToyLab lab;
  const theory::CheckReport report = theory::reversibility_suite(lab);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome out = from_report(report);
  double worst = 0.0;
  for (const auto& row : report.rows()) {
    if (row.check.rfind("reversibility/", 0) == 0) worst = std::max(worst, row.value);
  }
  out.detail += ", worst balance residual " + fmt(worst) + ", " + fmt(seconds, 3) + " s";
  out.pass = out.pass && seconds < 120.0;
  return out;
}

Outcome peskun() {
  theory::ToyLab lab;
  return from_report(theory::peskun_suite(lab));
}

Outcome gap_bounds() {
  theory::ToyLab lab;
  const theory::CheckReport report = theory::gap_bound_suite(lab);
  for (const auto& row : report.rows()) {
    if (row.check.rfind("gap_bound/", 0) == 0) {
      info(row.check + ": gap " + fmt(row.value) + " >= " + fmt(row.bound));
    }
  }
  return from_report(report);
}

// ---- auxiliary-variable distributions ---------------------------------------

// Pearson test of joint counts against independent Poisson cells, with the
// counts of each datum capped into a tail cell.
double joint_poisson_p(const std::vector<double>& means,
                       const std::function<std::vector<int>()>& draw, std::size_t draws) {
  const double top = *std::max_element(means.begin(), means.end());
  const int cap = std::max(8, static_cast<int>(std::ceil(top + 6.0 * std::sqrt(top))) + 1);
  const std::size_t n = means.size();
  std::size_t cells = 1;
  for (std::size_t i = 0; i < n; ++i) cells *= static_cast<std::size_t>(cap + 1);

  std::vector<std::vector<double>> marginal(n, std::vector<double>(cap + 1));
  for (std::size_t i = 0; i < n; ++i) {
    double used = 0.0;
    for (int k = 0; k < cap; ++k) {
      marginal[i][k] = std::exp(poisson_log_pmf(static_cast<std::uint64_t>(k), means[i]));
      used += marginal[i][k];
    }
    marginal[i][cap] = std::max(0.0, 1.0 - used);
  }
  std::vector<double> observed(cells, 0.0), expected(cells, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    double p = 1.0;
    std::size_t rest = c;
    for (std::size_t i = 0; i < n; ++i) {
      p *= marginal[i][rest % (cap + 1)];
      rest /= (cap + 1);
    }
    expected[c] = p * static_cast<double>(draws);
  }
  for (std::size_t t = 0; t < draws; ++t) {
    const std::vector<int> counts = draw();
    std::size_t c = 0, stride = 1;
    for (std::size_t i = 0; i < n; ++i) {
      c += static_cast<std::size_t>(std::min(counts[i], cap)) * stride;
      stride *= static_cast<std::size_t>(cap + 1);
    }
    observed[c] += 1.0;
  }
  return mcaux::testing::chi_square_p(observed, expected);
}

Outcome auxiliary_distribution() {
  constexpr std::size_t kDraws = 1'000'000;
  constexpr double kAlpha = 1e-3;
  Outcome out{true, ""};
  auto record = [&](const std::string& name, double p) {
    out.pass = out.pass && p > kAlpha;
    out.detail += (out.detail.empty() ? "" : ", ") + name + " p=" + fmt(p, 3);
  };

  {
    const mcaux::testing::QuadraticBoundedModel model({0.3, -0.5}, 1.0, 1.0);
    const PoissonMinibatcher batcher(model, model.total_bound());
    const ParamVec theta = vec({0.2});
    RngStream rng(101, 0);
    record("poisson/N=2", joint_poisson_p(batcher.means(theta),
                                          [&] { return batcher.draw(theta, rng).dense(2); }, kDraws));
  }
  {
    const auto toy = models::gaussian_grid_toy();
    const PoissonMinibatcher batcher(*toy.model, toy.model->total_bound());
    const ParamVec theta = vec({0.5});
    RngStream rng(102, 0);
    record("poisson/N=3", joint_poisson_p(batcher.means(theta),
                                          [&] { return batcher.draw(theta, rng).dense(3); }, kDraws));
  }
  {
    RowMatrix slopes(2, 2);
    slopes << 1.0, -0.5, 0.3, 2.0;
    Eigen::VectorXd offsets(2);
    offsets << 0.1, -0.2;
    const models::LinearPotentials model(slopes, offsets);
    const TunaMinibatcher batcher(model, 1.0);
    const ParamVec from = vec({0.1, 0.2});
    const ParamVec to = vec({0.4, -0.1});
    RngStream rng(103, 0);
    record("tuna/N=2", joint_poisson_p(batcher.means(from, to),
                                       [&] { return batcher.draw(from, to, rng).dense(2); }, kDraws));
  }
  {
    const auto toy = models::logistic_grid_toy();
    const TunaMinibatcher batcher(*toy.model, 1.0);
    const ParamVec from = vec({0.3});
    const ParamVec to = vec({-0.3});
    RngStream rng(104, 0);
    record("tuna/N=3", joint_poisson_p(batcher.means(from, to),
                                       [&] { return batcher.draw(from, to, rng).dense(3); }, kDraws));
  }
  return out;
}

Outcome unbiasedness() {
  theory::ToyLab lab;
  return from_report(theory::unbiasedness_suite(lab, 7, 10));
}

Outcome divergences() {
  theory::ToyLab lab;
  return from_report(theory::divergence_suite(lab));
}

// ---- mean squared error on the truncated Gaussian ---------------------------

Eigen::VectorXd linear_sigma(std::size_t d, double top, double bottom) {
  Eigen::VectorXd s(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    s[static_cast<Eigen::Index>(j)] =
        d == 1 ? top : top + (bottom - top) * static_cast<double>(j) / static_cast<double>(d - 1);
  }
  return s;
}

ParamVec draw_in_support(const LogTarget& target, std::size_t d, RngStream& rng) {
  ParamVec theta(static_cast<Eigen::Index>(d));
  do {
    for (auto& x : theta) x = rng.normal();
  } while (!target.in_support(theta));
  return theta;
}

Outcome gaussian_mse() {
  constexpr std::size_t kDim = 5;
  constexpr std::size_t kData = 10'000;
  constexpr std::size_t kSteps = 200'000;
  constexpr std::size_t kFloorSteps = 1'000'000;
  constexpr double kCube = 3.0;
  const Eigen::VectorXd sigma = linear_sigma(kDim, 1.0, 0.2);
  RngStream data_rng(2024, 0);
  const models::TruncatedHeteroGaussian model(models::synth_gaussian_data(kData, sigma, data_rng),
                                              1e-4, sigma, kCube);
  const double total = model.total_bound();
  const double lambda = 0.0005 * total * total;
  const PoissonMinibatcher batcher(model, lambda);
  const BoundedModelTarget target(model);
  const ParamVec ref_mean = model.posterior_mean();
  const ParamVec ref_var = model.posterior_variance();
  info("L = " + fmt(total) + ", lambda = " + fmt(lambda));

  // Monte Carlo error floor of a long full-batch random walk: mean over
  // dimensions of posterior variance / ESS.
  double floor = 0.0;
  {
    RngStream rng(1, 0);
    FullBatchSampler rwm(ProposalKind::random_walk, target, 0.5);
    const TuneResult tune = tune_step_size(rwm, 0.3, draw_in_support(target, kDim, rng), rng);
    const ChainTrace trace = run_chain(rwm, tune.final_theta, kFloorSteps, rng);
    const EssReport ess = ess_report(trace, 0.0);
    for (std::size_t j = 0; j < kDim; ++j) {
      floor += ref_var[static_cast<Eigen::Index>(j)] / ess.per_dim[j];
    }
    floor /= static_cast<double>(kDim);
    const std::size_t last = kFloorSteps;
    const auto final_mse = mse_vs_reference(trace, ref_mean, std::nullopt, std::span(&last, 1));
    info("floor (var/ESS, 1e6 RWM steps) = " + fmt(floor) + ", realised MSE = " +
         fmt(final_mse.back().mse_mean));
  }

  const std::vector<std::size_t> steps = log_spaced_steps(kSteps, 20);
  const char* names[] = {"poissonmh", "poisson_mala", "poisson_barker", "rwm", "mala", "barker"};
  const double rates[] = {0.25, 0.4, 0.55};
  int failures = 0;
  int total_runs = 0;
  std::uint64_t stream = 10;
  for (const char* name : names) {
    for (double rate : rates) {
      ++total_runs;
      RngStream rng(2, stream++);
      std::unique_ptr<Sampler> sampler;
      const std::string n = name;
      if (n == "poissonmh") {
        sampler = std::make_unique<PoissonMhSampler>(batcher, std::make_shared<GaussianRandomWalk>(0.5));
      } else if (n == "poisson_mala") {
        sampler = std::make_unique<LbPoissonSampler>(batcher, BalancingFunction::sqrt, 0.5);
      } else if (n == "poisson_barker") {
        sampler = std::make_unique<LbPoissonSampler>(batcher, BalancingFunction::barker, 0.5);
      } else {
        const ProposalKind kind = n == "rwm"    ? ProposalKind::random_walk
                                  : n == "mala" ? ProposalKind::mala
                                                : ProposalKind::barker;
        sampler = std::make_unique<FullBatchSampler>(kind, target, 0.5);
      }
      const TuneResult tune =
          tune_step_size(*sampler, rate, draw_in_support(target, kDim, rng), rng);
      const ChainTrace trace = run_chain(*sampler, tune.final_theta, kSteps, rng);
      const auto curve = mse_vs_reference(trace, ref_mean, ref_var, steps);
      double best = std::numeric_limits<double>::infinity();
      for (const MsePoint& p : curve) {
        if (p.step >= 1000) best = std::min(best, p.mse_mean);
      }
      const bool tuned = std::abs(tune.achieved_rate - rate) <= 0.05;
      const bool low = !trace.aborted && best <= 10.0 * floor;
      if (!(tuned && low)) ++failures;
      info(n + " rate " + fmt(rate, 2) + ": achieved " + fmt(tune.achieved_rate, 3) + ", min MSE " +
           fmt(best) + " (" + fmt(best / floor, 3) + "x floor), final MSE " +
           fmt(curve.back().mse_mean) + ", mean batch " + fmt(trace.mean_batch_size(), 4) +
           (tuned && low ? "" : "  <- miss"));
    }
  }
  return {failures == 0, std::to_string(total_runs - failures) + "/" + std::to_string(total_runs) +
                             " runs reach 10x the floor within 2e5 steps at the tuned rate"};
}

// ---- batch size at the paper's Gaussian configuration -----------------------

Outcome batch_size() {
  constexpr std::size_t kDim = 20;
  constexpr std::size_t kData = 100'000;
  constexpr double kBeta = 1e-5;
  constexpr double kCube = 3.0;
  constexpr int kDraws = 500;
  const Eigen::VectorXd sigma = linear_sigma(kDim, 1.0, 0.05);
  RngStream data_rng(2025, 0);
  RowMatrix y = models::synth_gaussian_data(kData, sigma, data_rng);
  const ParamVec ybar = y.colwise().mean().transpose();
  const models::TruncatedHeteroGaussian model(std::move(y), kBeta, sigma, kCube);
  const double total = model.total_bound();
  const double lambda = 0.0005 * total * total;
  const PoissonMinibatcher batcher(model, lambda);

  // Exact posterior draws: independent normals around the data mean,
  // truncated to the cube by rejection.
  RngStream rng(7, 0);
  double expected = 0.0;
  double realised = 0.0;
  ParamVec theta(static_cast<Eigen::Index>(kDim));
  for (int k = 0; k < kDraws; ++k) {
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      const double sd = std::sqrt(sigma[j] / (kBeta * static_cast<double>(kData)));
      double x;
      do {
        x = ybar[j] + sd * rng.normal();
      } while (std::abs(x) > kCube);
      theta[j] = x;
    }
    expected += lambda + model.sum_phi(theta);
    realised += static_cast<double>(batcher.draw(theta, rng).kept_total());
  }
  expected /= kDraws;
  realised /= kDraws;
  const double rel = std::abs(realised - 6000.0) / 6000.0;
  return {rel <= 0.05, "L = " + fmt(total, 6) + ", lambda = " + fmt(lambda, 6) +
                           ", expected batch " + fmt(expected, 6) + ", realised " +
                           fmt(realised, 6) + " (" + fmt(100.0 * rel, 3) + "% from 6000)"};
}

// ---- logistic regression with Lipschitz minibatches -------------------------

double thinned_accuracy(const RowMatrix& x, const Eigen::VectorXd& y, const ChainTrace& trace,
                        double burn_in, std::size_t max_samples) {
  const std::size_t first = static_cast<std::size_t>(burn_in * static_cast<double>(trace.rows()));
  const std::size_t stride = std::max<std::size_t>(1, (trace.rows() - first) / max_samples);
  std::vector<ParamVec> samples;
  for (std::size_t t = first; t < trace.rows(); t += stride) samples.push_back(trace.row(t));
  return models::predictive_accuracy(x, y, samples);
}

Outcome logistic_accuracy() {
  constexpr std::size_t kData = 10'000;
  constexpr std::size_t kHoldout = 2'000;
  constexpr std::size_t kSteps = 50'000;
  constexpr std::size_t kReferenceSteps = 1'000'000;
  const ParamVec truth = vec({1.0, -0.875, 0.75, -0.625, 0.5});
  RngStream data_rng(2026, 0);
  models::RegressionData train = models::synth_logistic_data(kData, truth, data_rng);
  const models::RegressionData test = models::synth_logistic_data(kHoldout, truth, data_rng);
  const models::BayesLogistic model(std::move(train.x), std::move(train.y));
  const LipschitzModelTarget target(model);
  const TunaMinibatcher batcher(model, 1e-5);
  const ParamVec theta0 = ParamVec::Zero(truth.size());

  double reference = 0.0;
  {
    RngStream rng(3, 0);
    FullBatchSampler rwm(ProposalKind::random_walk, target, 0.01);
    const TuneResult tune = tune_step_size(rwm, 0.3, theta0, rng);
    const ChainTrace trace = run_chain(rwm, tune.final_theta, kReferenceSteps, rng);
    reference = thinned_accuracy(test.x, test.y, trace, 0.1, 1000);
    info("reference RWM (1e6 steps) holdout accuracy " + fmt(reference, 5));
  }

  Outcome out{true, ""};
  auto check = [&](Sampler& sampler, std::uint64_t stream) {
    RngStream rng(4, stream);
    // The pilot starts far above the working step size.
    TuneOptions options;
    options.max_blocks = 200;
    const TuneResult tune = tune_step_size(sampler, 0.4, theta0, rng, options);
    const ChainTrace trace = run_chain(sampler, tune.final_theta, kSteps, rng);
    const double acc = trace.aborted ? 0.0 : thinned_accuracy(test.x, test.y, trace, 0.1, 1000);
    const double gap = std::abs(acc - reference);
    out.pass = out.pass && gap <= 0.02;
    out.detail += (out.detail.empty() ? "" : ", ") + sampler.name() + " acc " + fmt(acc, 5) +
                  " (|diff| " + fmt(gap, 3) + ")";
    info(sampler.name() + ": step " + fmt(tune.step_size) + ", tuner " +
         (tune.converged ? "converged" : "not converged") + ", acceptance " +
         fmt(trace.acceptance_rate(), 3) + ", mean minibatch " + fmt(trace.mean_batch_size(), 4));
  };
  TunaMhSampler tuna(batcher, std::make_shared<GaussianRandomWalk>(0.01));
  check(tuna, 1);
  SgldConfig sgld;
  sgld.batch = 20;
  sgld.step = 0.01;
  sgld.clip = 2.0;
  TunaSgldSampler tuna_sgld(batcher, sgld);
  check(tuna_sgld, 2);
  out.detail = "reference " + fmt(reference, 5) + ", " + out.detail;
  return out;
}

// ---- numerical building blocks ----------------------------------------------

Outcome numerics() {
  Outcome out{true, ""};
  auto note = [&](bool ok, const std::string& text) {
    out.pass = out.pass && ok;
    out.detail += (out.detail.empty() ? "" : ", ") + text;
  };

  {
    constexpr std::size_t n = 1'000'000;
    RngStream rng(5, 0);
    std::vector<double> x(n);
    double prev = 0.0;
    for (auto& v : x) {
      prev = 0.5 * prev + std::sqrt(0.75) * rng.normal();
      v = prev;
    }
    const double e = ess(x);
    const double rel = std::abs(e - n / 3.0) / (n / 3.0);
    note(rel <= 0.10, "AR(1) ESS " + fmt(e, 6) + " vs " + fmt(n / 3.0, 6));
  }
  {
    double worst = 0.0;
    for (double g : {-4.0, -1.0, -0.1, 0.0, 0.3, 2.0, 7.5}) {
      const ParamVec from = vec({0.0});
      const ParamVec grad = vec({g});
      const double sigma = 0.7;
      const auto density = [&](double z) {
        return std::exp(barker_log_density(from, vec({z}), grad, sigma));
      };
      const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          density, -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), 15, 1e-12);
      // The proposal is 2 mu(z) p(z); half its mass is the normaliser Z.
      worst = std::max(worst, std::abs(0.5 * mass - 0.5));
    }
    note(worst <= 1e-8, "Barker Z error " + fmt(worst, 3));
  }
  {
    double worst = 0.0;
    auto track = [&](const auto& model, std::uint64_t seed) {
      RngStream rng(seed, 0);
      for (int probe = 0; probe < 50; ++probe) {
        ParamVec theta = model.random_support_point(rng);
        theta *= 0.9;
        const ParamVec analytic = full_grad_log_target(model, theta);
        const ParamVec numeric = mcaux::testing::numeric_gradient(
            [&](const ParamVec& t) { return full_log_target(model, t); }, theta);
        worst = std::max(worst, mcaux::testing::relative_error(analytic, numeric));
      }
    };
    RngStream rng(6, 0);
    const Eigen::VectorXd sigma = linear_sigma(3, 1.0, 0.25);
    track(models::TruncatedHeteroGaussian(models::synth_gaussian_data(200, sigma, rng), 1e-3, sigma, 3.0),
          60);
    auto robust = models::synth_robust_data(200, 3, rng);
    track(models::RobustLinReg(robust.x, robust.y, 4.0, 1e-3, 5.0), 61);
    auto logistic = models::synth_logistic_data(200, vec({1.0, -0.5, 0.25}), rng);
    track(models::BayesLogistic(logistic.x, logistic.y), 62);

    const auto toy = models::gaussian_grid_toy();
    const PoissonMinibatcher batcher(*toy.model, 2.0);
    for (int probe = 0; probe < 50; ++probe) {
      const ParamVec theta = vec({0.8 * (2.0 * rng.uniform() - 1.0)});
      const PoissonAuxState aux = batcher.draw(theta, rng);
      const ParamVec numeric = mcaux::testing::numeric_gradient(
          [&](const ParamVec& t) {
            return full_log_target(*toy.model, t) + aux_log_density_full(batcher, t, aux);
          },
          theta);
      worst = std::max(worst, mcaux::testing::relative_error(
                                  minibatch_grad_log_proxy(batcher, theta, aux), numeric));
    }
    note(worst < 1e-5, "worst gradient rel. error " + fmt(worst, 3));
  }
  return out;
}

// ---- exchange algorithm -----------------------------------------------------

Outcome exchange_mean() {
  constexpr int kSeeds = 10;
  constexpr std::size_t kSteps = 100'000;
  const models::FiniteExpFamily model = models::exchange_toy();
  const double truth = model.posterior_mean();
  double pooled = 0.0;
  double pooled_var = 0.0;
  int individual = 0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    RngStream rng(100 + static_cast<std::uint64_t>(seed), 0);
    ExchangeSampler<int> sampler(
        model, std::make_shared<GridProposal>(GridProposal::nearest_neighbour(model.grid())));
    const ParamVec theta0 = vec({model.grid()[model.grid().size() / 2]});
    const ChainTrace trace = run_chain(sampler, theta0, kSteps, rng);
    const std::vector<double> x = trace.column(0, 1);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size() - 1);
    const double se = std::sqrt(var / ess(x));
    if (std::abs(mean - truth) <= 3.0 * se) ++individual;
    pooled += mean / kSeeds;
    pooled_var += se * se;
  }
  const double pooled_se = std::sqrt(pooled_var) / kSeeds;
  const double z = std::abs(pooled - truth) / pooled_se;
  return {z <= 3.0, "pooled mean " + fmt(pooled, 6) + " vs exact " + fmt(truth, 6) + " (" +
                        fmt(z, 3) + " SE), " + std::to_string(individual) + "/" +
                        std::to_string(kSeeds) + " seeds within 3 SE"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"A1", "exact kernels are reversible", reversibility},
      {"A2", "Peskun ordering and equality cases", peskun},
      {"A3", "spectral gap and pointwise bounds", gap_bounds},
      {"A4", "auxiliary counts follow the product Poisson law", auxiliary_distribution},
      {"A5", "ratio estimators are unbiased", unbiasedness},
      {"A6", "Poisson divergences and Barker acceptance", divergences},
      {"A7", "truncated Gaussian MSE reaches the floor", gaussian_mse},
      {"A8", "Gaussian batch size near 6000", batch_size},
      {"A9", "logistic holdout accuracy", logistic_accuracy},
      {"A10", "ESS, Barker normaliser and gradients", numerics},
      {"A11", "exchange posterior mean", exchange_mean},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    std::cout << c.id << ": " << c.title << '\n' << std::flush;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failed;
    std::printf("%-4s %s  %s  [%.1f s]\n", c.id, out.pass ? "PASS" : "FAIL", out.detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
