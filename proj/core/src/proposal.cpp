#include "mcaux/proposal.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mcaux/errors.hpp"

namespace mcaux {

double Proposal::scale() const { throw PreconditionError("proposal has no tunable scale"); }

void Proposal::set_scale(double) { throw PreconditionError("proposal has no tunable scale"); }

GaussianRandomWalk::GaussianRandomWalk(double sigma) : sigma_(sigma) { set_scale(sigma); }

void GaussianRandomWalk::set_scale(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw PreconditionError("random-walk scale must be positive and finite");
  }
  sigma_ = sigma;
}

ParamVec GaussianRandomWalk::sample(const ParamVec& from, RngStream& rng) const {
  ParamVec to(from.size());
  for (Eigen::Index j = 0; j < to.size(); ++j) to[j] = from[j] + sigma_ * rng.normal();
  return to;
}

double GaussianRandomWalk::log_density(const ParamVec& from, const ParamVec& to) const {
  return gaussian_log_density(to, from, sigma_);
}

GridProposal::GridProposal(std::vector<double> grid, Eigen::MatrixXd rows)
    : grid_(std::move(grid)), rows_(std::move(rows)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (n == 0 || rows_.rows() != n || rows_.cols() != n) {
    throw PreconditionError("grid proposal matrix must be n x n for n grid points");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if ((rows_.row(i).array() < 0.0).any() || std::fabs(rows_.row(i).sum() - 1.0) > 1e-12) {
      throw PreconditionError("grid proposal rows must be probability vectors");
    }
  }
}

GridProposal GridProposal::nearest_neighbour(std::vector<double> grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q(i, i > 0 ? i - 1 : i) += 0.5;
    q(i, i + 1 < n ? i + 1 : i) += 0.5;
  }
  return GridProposal(std::move(grid), std::move(q));
}

GridProposal GridProposal::discretized_gaussian(std::vector<double> grid, double width) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (n < 2) throw PreconditionError("discretized_gaussian needs at least two grid points");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = grid[static_cast<std::size_t>(j)] - grid[static_cast<std::size_t>(i)];
      q(i, j) = std::exp(-0.5 * d * d / (width * width));
    }
    q.row(i) /= q.row(i).sum();
  }
  return GridProposal(std::move(grid), std::move(q));
}

std::size_t GridProposal::slot(double value) const {
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (std::fabs(grid_[k] - value) <= 1e-12) return k;
  }
  throw PreconditionError("value is not a grid point");
}

ParamVec GridProposal::sample(const ParamVec& from, RngStream& rng) const {
  const auto row = static_cast<Eigen::Index>(slot(from[0]));
  const double u = rng.uniform();
  double cdf = 0.0;
  Eigen::Index pick = rows_.cols() - 1;
  for (Eigen::Index k = 0; k < rows_.cols(); ++k) {
    cdf += rows_(row, k);
    if (u < cdf) {
      pick = k;
      break;
    }
  }
  ParamVec to(1);
  to[0] = grid_[static_cast<std::size_t>(pick)];
  return to;
}

double GridProposal::log_density(const ParamVec& from, const ParamVec& to) const {
  return std::log(rows_(static_cast<Eigen::Index>(slot(from[0])),
                        static_cast<Eigen::Index>(slot(to[0]))));
}

bool GridProposal::symmetric() const { return (rows_ - rows_.transpose()).cwiseAbs().maxCoeff() == 0.0; }

double gaussian_log_density(const ParamVec& x, const ParamVec& mean, double sigma) {
  const double d = static_cast<double>(x.size());
  return -0.5 * (x - mean).squaredNorm() / (sigma * sigma) -
         d * (std::log(sigma) + 0.5 * std::log(2.0 * std::numbers::pi));
}

}  // namespace mcaux
