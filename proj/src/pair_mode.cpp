#include <cmath>
#include <stdexcept>

#include "spinprobe/scan.hpp"
#include "spinprobe/units.hpp"

namespace spinprobe {

namespace {

const SpinOperatorSet& spin_one() {
  static const SpinOperatorSet ops = spin_operators(1.0);
  return ops;
}

double site_distance(const Vec3& tip, const SampleSite& site) {
  const double d = (tip - site.position).norm();
  if (d < kCoincidenceDistance) throw std::invalid_argument("pair mode: tip coincides with the sample site");
  return d;
}

}  // namespace

std::vector<SectorResonance> pair_mode_resonance(const Vec3& tip, const SampleSite& site, const ScanConfig& cfg) {
  cfg.probe.validate();
  const auto& probe_ops = spin_one();
  const SpinOperatorSet sample_ops = spin_operators(site.spin_mag);
  const Eigen::Index ns = sample_ops.dim();
  const CMatrix id_probe = probe_ops.identity();
  const CMatrix id_sample = sample_ops.identity();
  const Vec3 r = tip - site.position;
  const double d = site_distance(tip, site);

  CMatrix h = kron(zfs_hamiltonian(cfg.probe).matrix(), id_sample);
  h += kron(zeeman_hamiltonian(cfg.probe.g, cfg.b_ext, probe_ops).matrix(), id_sample);
  h += kron(id_probe, zeeman_hamiltonian(site.g, cfg.b_ext, sample_ops).matrix());
  if (uses_exchange(cfg.mode))
    h += exchange_pair_hamiltonian(exchange_constant(d, cfg.exchange_prefactor), probe_ops, sample_ops).matrix();
  if (uses_dipolar(cfg.mode))
    h += dipole_pair_hamiltonian(cfg.probe.g, site.g, r, probe_ops, sample_ops).matrix();

  const auto eig = eigensolve(HermitianMatrix(std::move(h)));

  // Product basis index: probe row (m_t = +1, 0, -1) times ns plus sample row (m_s = s ... -s).
  std::vector<SectorResonance> out;
  std::vector<bool> taken(static_cast<std::size_t>(eig.values.size()), false);
  for (Eigen::Index k = 0; k < ns; ++k) {
    const Eigen::Index zero = detail::max_overlap_state(eig, 1 * ns + k, taken);
    taken[static_cast<std::size_t>(zero)] = true;
    const Eigen::Index plus = detail::max_overlap_state(eig, 0 * ns + k, taken);
    taken[static_cast<std::size_t>(plus)] = true;
    const Eigen::Index minus = detail::max_overlap_state(eig, 2 * ns + k, taken);
    taken[static_cast<std::size_t>(minus)] = true;
    const double e0 = eig.values(zero);
    out.push_back({sample_ops.s - static_cast<double>(k),
                   {units::energy_to_frequency(eig.values(plus) - e0), units::energy_to_frequency(eig.values(minus) - e0)}});
  }
  return out;
}

BranchTransitions mean_field_sector(const Vec3& tip, const SampleSite& site, double m_s, const ScanConfig& cfg) {
  SampleSite classical = site;
  classical.spin_dir = Vec3::UnitZ();
  classical.spin_mag = std::abs(m_s);
  if (m_s < 0.0) classical.spin_dir = -Vec3::UnitZ();
  const SpinTexture tex({classical}, LatticeMeta{});
  return probe_transitions(probe_hamiltonian_at(tip, tex, cfg));
}

}  // namespace spinprobe
