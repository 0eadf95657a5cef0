#pragma once

#include "spinprobe/linalg.hpp"

namespace spinprobe {

/// Ascending eigenvalues and matching orthonormal eigenvector columns.
template <typename Scalar>
struct EigenDecomposition {
  RVector values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
  int sweeps = 0;
};

using HermitianEigen = EigenDecomposition<Complex>;
using SymmetricEigen = EigenDecomposition<double>;

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
HermitianEigen eigensolve(const HermitianMatrix& h);

/// Same algorithm for a real symmetric matrix.  Throws std::invalid_argument if `a` is not symmetric to 1e-10.
SymmetricEigen eigensolve_symmetric(const RMatrix& a);

}  // namespace spinprobe
