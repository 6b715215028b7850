#include "mcaux/theory/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "mcaux/errors.hpp"
#include "mcaux/rng.hpp"
#include "mcaux/theory/checks.hpp"

namespace mcaux::theory {
namespace {

constexpr double kBalanceTol = 1e-9;
constexpr double kPeskunTol = 1e-12;
constexpr double kEqualityTol = 1e-10;
constexpr double kStochasticTol = 1e-10;

double max_row_error(const KernelMatrix& k) {
  return (k.P.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

}  // namespace

void CheckReport::add(std::string check, double value, double bound, bool pass) {
  rows_.push_back({std::move(check), value, bound, pass});
}

void CheckReport::merge(const CheckReport& other) {
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

bool CheckReport::all_passed() const { return failures() == 0; }

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [](const CheckRow& r) { return !r.pass; }));
}

void CheckReport::write_text(std::ostream& out) const {
  std::size_t width = 5;
  for (const CheckRow& r : rows_) width = std::max(width, r.check.size());
  for (const CheckRow& r : rows_) {
    out << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width))
        << r.check << "  value=" << std::setprecision(6) << std::scientific << r.value
        << "  bound=" << r.bound << std::defaultfloat << '\n';
  }
  out << (rows_.size() - failures()) << '/' << rows_.size() << " checks passed\n";
}

void CheckReport::write_csv(std::ostream& out) const {
  out << "check,value,bound,pass\n" << std::setprecision(17);
  for (const CheckRow& r : rows_) {
    out << r.check << ',' << r.value << ',' << r.bound << ',' << (r.pass ? "true" : "false")
        << '\n';
  }
}

// ---- toy lab -------------------------------------------------------------------

ToyLab::ToyLab()
    : gaussian_(models::gaussian_grid_toy()),
      logistic_(models::logistic_grid_toy()),
      exchange_(models::exchange_toy()) {}

const PoissonMinibatcher& ToyLab::poisson_batcher(double lambda) {
  if (lambda <= 0.0) lambda = gaussian_.model->total_bound();
  for (const PoissonMinibatcher& b : poisson_batchers_) {
    if (b.lambda() == lambda) return b;
  }
  return poisson_batchers_.emplace_back(*gaussian_.model, lambda);
}

const TunaMinibatcher& ToyLab::tuna_batcher(double chi) {
  for (const TunaMinibatcher& b : tuna_batchers_) {
    if (b.chi() == chi) return b;
  }
  return tuna_batchers_.emplace_back(*logistic_.model, chi);
}

std::unique_ptr<FiniteScheme> ToyLab::rwm() const {
  std::vector<double> log_target;
  for (double x : gaussian_.grid) {
    ParamVec theta(1);
    theta[0] = x;
    log_target.push_back(full_log_target(*gaussian_.model, theta));
  }
  return std::make_unique<MetropolisScheme>(
      std::move(log_target), GridProposal::discretized_gaussian(gaussian_.grid, 0.5));
}

std::unique_ptr<FiniteScheme> ToyLab::exchange() const {
  return std::make_unique<ExchangeScheme>(exchange_,
                                          GridProposal::nearest_neighbour(exchange_.grid()));
}

std::unique_ptr<FiniteScheme> ToyLab::poissonmh(double lambda) {
  return std::make_unique<PoissonMhScheme>(
      poisson_batcher(lambda), GridProposal::discretized_gaussian(gaussian_.grid, 0.5));
}

std::unique_ptr<FiniteScheme> ToyLab::tunamh(double chi) {
  return std::make_unique<TunaMhScheme>(tuna_batcher(chi),
                                        GridProposal::discretized_gaussian(logistic_.grid, 0.3));
}

std::unique_ptr<FiniteScheme> ToyLab::lb_poisson(BalancingFunction g, double lambda) {
  return std::make_unique<LbPoissonScheme>(poisson_batcher(lambda), gaussian_.grid, g, 0.5);
}

std::unique_ptr<FiniteScheme> ToyLab::tuna_sgld(double chi) {
  SgldConfig config;
  config.batch = 2;
  config.step = 0.3;
  config.clip = 2.0;
  return std::make_unique<TunaSgldScheme>(tuna_batcher(chi), logistic_.grid, config);
}

const std::vector<std::string>& ToyLab::scheme_names() {
  static const std::vector<std::string> names{"rwm",          "exchange",       "poissonmh", "tunamh",
                                              "poisson_mala", "poisson_barker", "tuna_sgld"};
  return names;
}

std::unique_ptr<FiniteScheme> ToyLab::scheme(const std::string& name) {
  if (name == "rwm") return rwm();
  if (name == "exchange") return exchange();
  if (name == "poissonmh") return poissonmh();
  if (name == "tunamh") return tunamh();
  if (name == "poisson_mala") return lb_poisson(BalancingFunction::sqrt);
  if (name == "poisson_barker") return lb_poisson(BalancingFunction::barker);
  if (name == "tuna_sgld") return tuna_sgld();
  throw PreconditionError("no toy instance for sampler '" + name + "'");
}

std::vector<std::unique_ptr<FiniteScheme>> ToyLab::all_schemes() {
  std::vector<std::unique_ptr<FiniteScheme>> out;
  for (const std::string& name : scheme_names()) out.push_back(scheme(name));
  return out;
}

// ---- suites ---------------------------------------------------------------------

CheckReport reversibility_suite(ToyLab& lab, AcceptanceRule rule,
                                const std::vector<std::string>& names) {
  CheckReport report;
  const std::string suffix = rule == AcceptanceRule::metropolis ? "" : "/barker_rule";
  for (const std::string& name : names.empty() ? ToyLab::scheme_names() : names) {
    const auto scheme = lab.scheme(name);
    const KernelTriple k = build_kernels(*scheme, rule);
    const std::string stem = scheme->name() + suffix;
    const double residual = detailed_balance_residual(k.aux);
    report.add("reversibility/" + stem, residual, kBalanceTol, residual <= kBalanceTol);
    const double rows = std::max({max_row_error(k.aux), max_row_error(k.mwg), max_row_error(k.ideal)});
    report.add("row_sums/" + stem, rows, kStochasticTol, rows <= kStochasticTol);
    report.add("enumeration_deficit/" + stem, k.max_deficit, 1e-10, k.max_deficit <= 1e-10);
  }
  return report;
}

CheckReport peskun_suite(ToyLab& lab) {
  CheckReport report;
  for (const auto& scheme : {lab.poissonmh(), lab.tunamh(), lab.tuna_sgld()}) {
    const KernelTriple k = build_kernels(*scheme);
    const PeskunReport p = check_peskun(k.aux, k.mwg, k.ideal, kPeskunTol);
    report.add("peskun_aux_mwg/" + scheme->name(), p.aux_over_mwg, kPeskunTol,
               p.aux_over_mwg <= kPeskunTol);
    report.add("peskun_mwg_ideal/" + scheme->name(), p.mwg_over_ideal, kPeskunTol,
               p.mwg_over_ideal <= kPeskunTol);
  }
  for (const auto& scheme : {lab.poissonmh(), lab.tunamh(), lab.exchange()}) {
    // No first auxiliary variable: MwG and ideal coincide.
    const KernelTriple k = build_kernels(*scheme);
    const double gap = (k.mwg.P - k.ideal.P).cwiseAbs().maxCoeff();
    report.add("mwg_equals_ideal/" + scheme->name(), gap, 1e-12, gap <= 1e-12);
  }
  for (auto g : {BalancingFunction::sqrt, BalancingFunction::barker}) {
    auto scheme = lab.lb_poisson(g);
    const KernelTriple k = build_kernels(*scheme);
    const PeskunReport p = check_peskun(k.aux, k.mwg, k.ideal, kPeskunTol);
    report.add("aux_equals_mwg/" + scheme->name(), p.aux_mwg_distance, kEqualityTol,
               p.aux_mwg_distance <= kEqualityTol);
  }
  return report;
}

CheckReport gap_bound_suite(ToyLab& lab) {
  CheckReport report;
  const double total = lab.gaussian().model->total_bound();
  const std::pair<const char*, double> lambdas[] = {
      {"L/2", 0.5 * total}, {"L", total}, {"4L", 4.0 * total}};
  for (const auto& [label, lambda] : lambdas) {
    auto scheme = lab.poissonmh(lambda);
    const KernelTriple k = build_kernels(*scheme);
    const GapBoundReport g = check_gap_bound(k.aux, k.ideal, poisson_gap_factor(total, lambda));
    report.add(std::string("gap_bound/poissonmh/lambda=") + label, g.gap_aux,
               g.factor * g.gap_reference, g.holds);
    const PointwiseReport pw = check_pointwise_bound(k, aux_tv_matrix(*scheme));
    report.add(std::string("pointwise_tv/poissonmh/lambda=") + label, pw.min_slack, 0.0, pw.holds);
  }
  for (double chi : {0.5, 1.0, 2.0}) {
    auto scheme = lab.tunamh(chi);
    const KernelTriple k = build_kernels(*scheme);
    const GapBoundReport g = check_gap_bound(k.aux, k.ideal, tuna_gap_factor(chi));
    std::ostringstream label;
    label << chi;
    report.add("gap_bound/tunamh/chi=" + label.str(), g.gap_aux, g.factor * g.gap_reference,
               g.holds);
    const PointwiseReport pw = check_pointwise_bound(k, aux_tv_matrix(*scheme));
    report.add("pointwise_tv/tunamh/chi=" + label.str(), pw.min_slack, 0.0, pw.holds);
  }
  for (const auto& scheme : {lab.exchange(), lab.tuna_sgld(), lab.lb_poisson(BalancingFunction::barker)}) {
    const KernelTriple k = build_kernels(*scheme);
    const PointwiseReport pw = check_pointwise_bound(k, aux_tv_matrix(*scheme));
    report.add("pointwise_tv/" + scheme->name(), pw.min_slack, 0.0, pw.holds);
  }
  for (const auto& scheme : {lab.poissonmh(), lab.tunamh(), lab.tuna_sgld()}) {
    const KernelTriple k = build_kernels(*scheme);
    const GapBoundReport tv = check_gap_bound(k.aux, k.mwg, tv_comparison_factor(*scheme));
    report.add("uniform_tv_gap/" + scheme->name(), tv.gap_aux, tv.factor * tv.gap_reference,
               tv.holds);
    const GapBoundReport kl = check_gap_bound(k.aux, k.mwg, kl_comparison_factor(*scheme));
    report.add("uniform_kl_gap/" + scheme->name(), kl.gap_aux, kl.factor * kl.gap_reference,
               kl.holds);
  }
  return report;
}

CheckReport unbiasedness_suite(ToyLab& lab, std::uint64_t seed, int pairs) {
  CheckReport report;
  RngStream rng(seed, 0);
  for (const auto& scheme : {lab.poissonmh(), lab.tunamh()}) {
    const std::size_t n = scheme->num_states();
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
      const std::size_t s = rng.uniform_index(n);
      std::size_t t = rng.uniform_index(n - 1);
      if (t >= s) ++t;
      worst = std::max(worst, unbiasedness_residual(*scheme, s, t));
    }
    report.add("unbiasedness/" + scheme->name(), worst, 1e-9, worst <= 1e-9);
  }
  return report;
}

CheckReport divergence_suite(ToyLab& lab) {
  CheckReport report;
  double worst = 0.0;
  const double grid[] = {0.05, 0.3, 1.0, 2.5, 6.0};
  int used = 0;
  for (double a : grid) {
    for (double b : grid) {
      if (a == b || used == 20) continue;
      worst = std::max(worst, std::abs(kl_poisson(a, b) - kl_poisson_series(a, b)));
      ++used;
    }
  }
  report.add("kl_poisson_series", worst, 1e-10, worst <= 1e-10 && used == 20);

  // Over m <= a <= b <= M the largest KL sits at (m, M).
  const double lo = 0.5;
  const double hi = 4.0;
  double best = -1.0;
  double at_corner = kl_poisson(lo, hi);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double a = lo + (hi - lo) * i / 4.0;
      const double b = lo + (hi - lo) * j / 4.0;
      if (a <= b) best = std::max(best, kl_poisson(a, b));
    }
  }
  report.add("kl_corner_max", best, at_corner, best <= at_corner);

  auto scheme = lab.poissonmh();
  const KernelTriple k = build_kernels(*scheme, AcceptanceRule::barker);
  const double residual = detailed_balance_residual(k.aux);
  report.add("reversibility/poissonmh/barker_rule", residual, kBalanceTol, residual <= kBalanceTol);
  return report;
}

CheckReport run_default_suite(const std::vector<std::string>& names) {
  ToyLab lab;
  CheckReport report;
  report.merge(reversibility_suite(lab, AcceptanceRule::metropolis, names));
  report.merge(peskun_suite(lab));
  report.merge(gap_bound_suite(lab));
  report.merge(unbiasedness_suite(lab));
  report.merge(divergence_suite(lab));
  return report;
}

}  // namespace mcaux::theory
