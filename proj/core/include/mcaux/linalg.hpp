#pragma once

#include <Eigen/Core>

namespace mcaux {

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column k pairs with values[k]
  int sweeps = 0;
};

// Cyclic Jacobi rotations. The input must be symmetric to within
// symmetry_tol (relative to its largest entry) or PreconditionError is thrown.
SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double symmetry_tol = 1e-10, int max_sweeps = 100);

}  // namespace mcaux
