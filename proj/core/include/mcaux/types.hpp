#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace mcaux {

using ParamVec = Eigen::VectorXd;

inline bool all_finite(const ParamVec& theta) { return theta.allFinite(); }

struct ChainState {
  ParamVec theta;
  std::size_t step_index = 0;
  double cumulative_seconds = 0.0;
};

}  // namespace mcaux

namespace mcaux {

// One datum per row so per-datum access is contiguous.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace mcaux
