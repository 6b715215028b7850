#pragma once

#include <vector>

#include "mcaux/rng.hpp"
#include "mcaux/types.hpp"

namespace mcaux {

class Proposal {
 public:
  virtual ~Proposal() = default;
  virtual ParamVec sample(const ParamVec& from, RngStream& rng) const = 0;
  virtual double log_density(const ParamVec& from, const ParamVec& to) const = 0;
  virtual bool symmetric() const { return false; }
  // Tunable scale; proposals without one throw PreconditionError.
  virtual double scale() const;
  virtual void set_scale(double scale);
};

// theta + sigma * z, z ~ N(0, I).
class GaussianRandomWalk final : public Proposal {
 public:
  explicit GaussianRandomWalk(double sigma);
  ParamVec sample(const ParamVec& from, RngStream& rng) const override;
  double log_density(const ParamVec& from, const ParamVec& to) const override;
  bool symmetric() const override { return true; }
  double scale() const override { return sigma_; }
  void set_scale(double sigma) override;

 private:
  double sigma_;
};

// Transition matrix over the points of a scalar grid.
class GridProposal final : public Proposal {
 public:
  GridProposal(std::vector<double> grid, Eigen::MatrixXd rows);
  // Half the mass on each neighbour; at an end the missing half is a
  // self-loop.
  static GridProposal nearest_neighbour(std::vector<double> grid);
  // q(s, t) proportional to exp(-(x_t - x_s)^2 / (2 width^2)) over t != s.
  static GridProposal discretized_gaussian(std::vector<double> grid, double width);

  ParamVec sample(const ParamVec& from, RngStream& rng) const override;
  double log_density(const ParamVec& from, const ParamVec& to) const override;
  bool symmetric() const override;

  const std::vector<double>& grid() const noexcept { return grid_; }
  const Eigen::MatrixXd& matrix() const noexcept { return rows_; }
  // Slot of a grid value, PreconditionError if absent.
  std::size_t slot(double value) const;

 private:
  std::vector<double> grid_;
  Eigen::MatrixXd rows_;
};

// log N(x; mean, sigma^2 I)
double gaussian_log_density(const ParamVec& x, const ParamVec& mean, double sigma);

}  // namespace mcaux
