#pragma once

#include "spinprobe/eigensolver.hpp"
#include "spinprobe/linalg.hpp"

#include <cmath>
#include <vector>

namespace spinprobe {

/// Two probe transition frequencies in GHz, f_minus <= f_plus.
struct ResonancePair {
  double f_minus = 0.0;
  double f_plus = 0.0;
};

/// Signed transition frequencies (GHz) from the m=0-like state to the m=+1-like and m=-1-like states.
struct BranchTransitions {
  double to_plus = 0.0;
  double to_minus = 0.0;

  ResonancePair sorted() const;
  /// |E(+1-like) - E(-1-like)| / h.
  double splitting() const { return std::abs(to_plus - to_minus); }
};

/// Label spin-1 probe eigenstates by maximal overlap with |m=+1>, |0>, |-1> and return the transitions.
BranchTransitions probe_transitions(const HermitianMatrix& h_probe);

/// Resonances |E_k − E_0like| / h of a 3×3 probe Hamiltonian, sorted ascending.
ResonancePair probe_resonances(const HermitianMatrix& h_probe);

namespace detail {

/// Index of the eigenvector with the largest |<basis|ψ>|² among those not yet `taken`.
/// Ties go to the lower-energy state.
Eigen::Index max_overlap_state(const HermitianEigen& eig, Eigen::Index basis, const std::vector<bool>& taken);

}  // namespace detail

}  // namespace spinprobe
