#pragma once

#include "spinprobe/linalg.hpp"
#include "spinprobe/units.hpp"

namespace spinprobe {

/// Sx, Sy, Sz for spin quantum number s, basis ordered m = s, s-1, ..., -s.
struct SpinOperatorSet {
  double s = 0.5;
  CMatrix sx, sy, sz;

  Eigen::Index dim() const noexcept { return sz.rows(); }
  CMatrix identity() const { return CMatrix::Identity(dim(), dim()); }
  /// n·S for a real 3-vector n.
  CMatrix dot(const Vec3& n) const { return n.x() * sx + n.y() * sy + n.z() * sz; }
};

/// Throws std::invalid_argument unless 2s is a positive integer.
SpinOperatorSet spin_operators(double s);

/// Spin-1 defect probe.
struct ProbeSpec {
  double D = 14.4;               // zero-field splitting, μeV
  double g = units::kElectronG;

  /// Throws std::invalid_argument when D <= 0 or g is not finite.
  void validate() const;
};

enum class ExchangePrefactor { rydberg, hartree };

/// D (Sz² − S(S+1)/3) for a spin-1 probe.
HermitianMatrix zfs_hamiltonian(double D);
inline HermitianMatrix zfs_hamiltonian(const ProbeSpec& probe) { return zfs_hamiltonian(probe.D); }

/// g μ_B B·S, B in tesla.
HermitianMatrix zeeman_hamiltonian(double g, const Vec3& field_t, const SpinOperatorSet& ops);

/// Point-dipole coupling on ops1 ⊗ ops2; `r` (Å) joins the two spins.
HermitianMatrix dipole_pair_hamiltonian(double g1, double g2, const Vec3& r, const SpinOperatorSet& ops1,
                                        const SpinOperatorSet& ops2);

/// Secular dipolar energy scale μ0 γ1 γ2 ħ² / 4π r³ in μeV.
double dipole_energy_scale(double g1, double g2, double r);

/// Stray field (T) at displacement `r` (Å, source -> field point) of a classical spin vector.
Vec3 stray_field(const Vec3& r, const Vec3& spin, double g);

/// Distance-dependent exchange constant in μeV.  Warns once for r < 2 Å.
double exchange_constant(double r, ExchangePrefactor prefactor = ExchangePrefactor::rydberg);

/// J S1·S2 on ops1 ⊗ ops2.
HermitianMatrix exchange_pair_hamiltonian(double J, const SpinOperatorSet& ops1, const SpinOperatorSet& ops2);

}  // namespace spinprobe
