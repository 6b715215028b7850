#include "mcaux/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <unsupported/Eigen/FFT>

#include "mcaux/errors.hpp"

namespace mcaux {

std::vector<double> autocorrelation(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw PreconditionError("autocorrelation needs at least two samples");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  std::size_t padded = 1;
  while (padded < 2 * n) padded <<= 1;
  std::vector<double> buf(padded, 0.0);
  for (std::size_t t = 0; t < n; ++t) buf[t] = x[t] - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, buf);
  for (auto& f : freq) f = std::complex<double>(std::norm(f), 0.0);
  std::vector<std::complex<double>> back;
  fft.inv(back, freq);

  const double c0 = back[0].real();
  if (!(c0 > 0.0)) throw UndefinedEssError("zero-variance column");
  std::vector<double> rho(n);
  for (std::size_t k = 0; k < n; ++k) rho[k] = back[k].real() / c0;
  return rho;
}

double ess(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 100) throw PreconditionError("ess needs at least 100 samples");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) throw UndefinedEssError("zero-variance column");
  const std::vector<double> rho = autocorrelation(x);

  double prev = std::numeric_limits<double>::infinity();
  double pair_sum = 0.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double gamma = rho[2 * m] + rho[2 * m + 1];
    if (gamma <= 0.0) break;
    gamma = std::min(gamma, prev);
    prev = gamma;
    pair_sum += gamma;
  }
  const double tau = -1.0 + 2.0 * pair_sum;
  const double nd = static_cast<double>(n);
  if (!(tau > 0.0)) return nd;
  return std::min(nd, nd / tau);
}

EssReport ess_report(const ChainTrace& trace, double burn_in_fraction) {
  if (burn_in_fraction < 0.0 || burn_in_fraction >= 1.0) {
    throw PreconditionError("burn-in fraction must be in [0, 1)");
  }
  const std::size_t rows = trace.rows();
  const auto first = static_cast<std::size_t>(burn_in_fraction * static_cast<double>(rows));
  EssReport report;
  for (std::size_t j = 0; j < trace.dim; ++j) report.per_dim.push_back(ess(trace.column(j, first)));
  std::vector<double> sorted = report.per_dim;
  std::sort(sorted.begin(), sorted.end());
  report.min = sorted.front();
  report.max = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  report.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  if (trace.seconds.size() == rows && rows > 0) {
    report.seconds = trace.seconds.back() - trace.seconds[first];
  }
  if (report.seconds > 0.0) {
    report.min_per_second = report.min / report.seconds;
    report.median_per_second = report.median / report.seconds;
    report.max_per_second = report.max / report.seconds;
  }
  return report;
}

RunningMoments::RunningMoments(std::size_t dim)
    : mean_(ParamVec::Zero(static_cast<Eigen::Index>(dim))),
      m2_(ParamVec::Zero(static_cast<Eigen::Index>(dim))) {}

void RunningMoments::add(const ParamVec& x) {
  ++count_;
  const ParamVec delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta.cwiseProduct(x - mean_);
}

ParamVec RunningMoments::variance() const {
  if (count_ < 2) return ParamVec::Zero(mean_.size());
  return m2_ / static_cast<double>(count_ - 1);
}

std::vector<std::size_t> log_spaced_steps(std::size_t steps, std::size_t points_per_decade) {
  std::vector<std::size_t> out{0};
  if (steps == 0) return out;
  const double top = std::log10(static_cast<double>(steps));
  const auto count = static_cast<std::size_t>(std::ceil(top * static_cast<double>(points_per_decade)));
  for (std::size_t k = 0; k <= count; ++k) {
    const double v = std::pow(10.0, top * static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(count, 1)));
    const auto s = std::min(steps, static_cast<std::size_t>(std::llround(v)));
    if (s > out.back()) out.push_back(s);
  }
  if (out.back() != steps) out.push_back(steps);
  return out;
}

MseTracker::MseTracker(ParamVec ref_mean, std::optional<ParamVec> ref_var,
                       std::vector<std::size_t> steps)
    : ref_mean_(std::move(ref_mean)),
      ref_var_(std::move(ref_var)),
      steps_(std::move(steps)),
      moments_(static_cast<std::size_t>(ref_mean_.size())) {
  std::sort(steps_.begin(), steps_.end());
  steps_.erase(std::unique(steps_.begin(), steps_.end()), steps_.end());
}

void MseTracker::observe(std::size_t step, double seconds, const ParamVec& theta) {
  moments_.add(theta);
  while (next_ < steps_.size() && steps_[next_] < step) ++next_;
  if (next_ == steps_.size() || steps_[next_] != step) return;
  ++next_;
  const double d = static_cast<double>(ref_mean_.size());
  MsePoint p;
  p.step = step;
  p.seconds = seconds;
  p.mse_mean = (moments_.mean() - ref_mean_).squaredNorm() / d;
  p.mse_var = ref_var_ ? (moments_.variance() - *ref_var_).squaredNorm() / d
                       : std::numeric_limits<double>::quiet_NaN();
  points_.push_back(p);
}

std::vector<MsePoint> mse_vs_reference(const ChainTrace& trace, const ParamVec& ref_mean,
                                       const std::optional<ParamVec>& ref_var,
                                       std::span<const std::size_t> steps) {
  MseTracker tracker(ref_mean, ref_var, std::vector<std::size_t>(steps.begin(), steps.end()));
  for (std::size_t t = 0; t < trace.rows(); ++t) {
    tracker.observe(t, trace.seconds.size() > t ? trace.seconds[t] : 0.0, trace.row(t));
  }
  return tracker.points();
}

}  // namespace mcaux
