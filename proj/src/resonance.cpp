#include "spinprobe/resonance.hpp"

#include <algorithm>
#include <stdexcept>

#include "spinprobe/units.hpp"

namespace spinprobe {

ResonancePair BranchTransitions::sorted() const {
  const double a = std::abs(to_plus), b = std::abs(to_minus);
  return {std::min(a, b), std::max(a, b)};
}

namespace detail {

Eigen::Index max_overlap_state(const HermitianEigen& eig, Eigen::Index basis, const std::vector<bool>& taken) {
  constexpr double kTieTolerance = 1e-12;
  Eigen::Index best = -1;
  double best_overlap = -1.0;
  // Eigenvalues are ascending, so scanning upward and requiring a strict improvement keeps the lower-energy state on ties.
  for (Eigen::Index k = 0; k < eig.vectors.cols(); ++k) {
    if (taken[static_cast<std::size_t>(k)]) continue;
    const double overlap = std::norm(eig.vectors(basis, k));
    if (overlap > best_overlap + kTieTolerance) {
      best_overlap = overlap;
      best = k;
    }
  }
  return best;
}

}  // namespace detail

BranchTransitions probe_transitions(const HermitianMatrix& h_probe) {
  if (h_probe.dim() != 3) throw std::invalid_argument("probe_transitions: expected a 3x3 spin-1 Hamiltonian");
  const auto eig = eigensolve(h_probe);
  std::vector<bool> taken(3, false);
  // Basis order is m = +1, 0, -1.
  const auto zero = detail::max_overlap_state(eig, 1, taken);
  taken[static_cast<std::size_t>(zero)] = true;
  const auto plus = detail::max_overlap_state(eig, 0, taken);
  taken[static_cast<std::size_t>(plus)] = true;
  const auto minus = detail::max_overlap_state(eig, 2, taken);

  const double e0 = eig.values(zero);
  return {units::energy_to_frequency(eig.values(plus) - e0), units::energy_to_frequency(eig.values(minus) - e0)};
}

ResonancePair probe_resonances(const HermitianMatrix& h_probe) { return probe_transitions(h_probe).sorted(); }

}  // namespace spinprobe
