#pragma once

// Physical constants and the handful of conversions the simulator needs.
//
// Internal unit system: lengths in Angstrom, energies in micro-eV, magnetic
// fields in tesla, frequencies in GHz.  Every constant below is expressed in
// that system.

namespace spinprobe::units {

/// Planck constant in μeV per GHz.
inline constexpr double kPlanck = 4.135667696;
/// Bohr magneton in μeV per tesla (CODATA 2018).
inline constexpr double kBohrMagneton = 57.883818060;
/// Free-electron g-factor used when g is not given.
inline constexpr double kElectronG = 2.0023;
/// μ0/4π · μ_B in T·Å³: field of a one-Bohr-magneton dipole at 1 Å, per unit geometry factor.
inline constexpr double kDipoleFieldPerBohrMagneton = 0.92740100783;
/// Same prefactor for a g = 2 moment, 1.8548 T·Å³.
inline constexpr double kDipoleFieldG2 = 2.0 * kDipoleFieldPerBohrMagneton;
/// μ0/4π · μ_B² in μeV·Å³: dipole-dipole energy scale for two Bohr magnetons at 1 Å.
inline constexpr double kDipoleEnergyPerBohrMagneton2 = kBohrMagneton * kDipoleFieldPerBohrMagneton;

/// Rydberg energy e²/2a_B in μeV.
inline constexpr double kRydberg = 13.605693122994e6;
/// Hartree energy e²/a_B in μeV.
inline constexpr double kHartree = 27.211386245988e6;
/// Bohr radius in Å.
inline constexpr double kBohrRadius = 0.529177210903;

struct ConstantsTable {
  double h_planck = kPlanck;                    // μeV/GHz
  double mu_b = kBohrMagneton;                  // μeV/T
  double g_e_default = kElectronG;
  double dipole_field_g2 = kDipoleFieldG2;      // T·Å³
  double rydberg_ev = kRydberg * 1e-6;
  double hartree_ev = kHartree * 1e-6;
  double bohr_radius = kBohrRadius;             // Å
};

const ConstantsTable& constants() noexcept;

/// μeV -> GHz.  Linear; negative energies give negative frequencies.
constexpr double energy_to_frequency(double energy_uev) noexcept { return energy_uev / kPlanck; }

/// GHz -> μeV.
constexpr double frequency_to_energy(double freq_ghz) noexcept { return freq_ghz * kPlanck; }

}  // namespace spinprobe::units
