#pragma once

// Independent reference values and brute-force helpers used to check the library.
// Nothing here calls into spinprobe except for plain data types.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

inline constexpr double h = 4.135667696;              // μeV/GHz
inline constexpr double mu_b = 57.883818060;          // μeV/T
inline constexpr double field_per_mu_b = 0.92740100783;  // T·Å³
inline constexpr double a_bohr = 0.529177210903;      // Å
inline constexpr double rydberg = 13.605693122994e6;  // μeV

// Values pinned by an offline mpmath/numpy evaluation.
inline constexpr double exchange_3a_uev = 20344.35;
inline constexpr double exchange_4a_uev = 953.664;
inline constexpr double exchange_5a_uev = 38.0430;
inline constexpr double dipolar_3a_uev = 7.9528;
inline constexpr double crossover_g2_angstrom = 6.111794;
inline constexpr double crossover_g2e_angstrom = 6.111395;
inline constexpr double center_exchange_5x5_uev = 557.808;
inline constexpr double exchange_cond_4a = 2.3560060;
inline constexpr double fm_exchange_min_ghz = 9.9147;
inline constexpr double fm_exchange_max_ghz = 138.36;

inline double exchange(double r, double prefactor = rydberg) {
  const double x = r / a_bohr;
  return 1.641 * prefactor * x * x * std::sqrt(x) * std::exp(-2.0 * x);
}

// Dipolar pair energy scale g1·g2·μB²·μ0/(4π r³), μeV.
inline double dipolar_energy(double r, double g1 = 2.0, double g2 = 2.0) {
  return g1 * g2 * mu_b * field_per_mu_b / (r * r * r);
}

// Field (T) at offset r from a spin vector s with g-factor g, written with explicit components.
inline Eigen::Vector3d dipole_field(const Eigen::Vector3d& r, const Eigen::Vector3d& s, double g) {
  const double d2 = r.dot(r);
  const double d = std::sqrt(d2);
  const double rs = r.dot(s);
  const double pref = -g * field_per_mu_b / (d2 * d);
  Eigen::Vector3d out;
  for (int k = 0; k < 3; ++k) out[k] = pref * (3.0 * r[k] * rs / d2 - s[k]);
  return out;
}

// Exact spin-1 transitions for an axial Hamiltonian D(Sz² − 2/3) + b Sz, b in μeV.  Returns {to_plus, to_minus}.
inline std::pair<double, double> axial(double D, double b) { return {(D + b) / h, (D - b) / h}; }

// Second-order transitions for a weak transverse field b (μeV): {upper, lower}.
inline std::pair<double, double> transverse(double D, double b) {
  return {(D + 2.0 * b * b / D) / h, (D + b * b / D) / h};
}

// Spin operators by direct matrix elements, basis m = s..−s.
struct Ops {
  Eigen::MatrixXcd x, y, z;
};

inline Ops ops(double s) {
  const int d = static_cast<int>(std::lround(2 * s + 1));
  Ops o{Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d)};
  for (int a = 0; a < d; ++a) {
    const double ma = s - a;
    o.z(a, a) = ma;
    for (int b = 0; b < d; ++b) {
      const double mb = s - b;
      if (std::abs(ma - (mb + 1)) < 1e-12) {
        const double v = 0.5 * std::sqrt(s * (s + 1) - mb * (mb + 1));
        o.x(a, b) += v;
        o.x(b, a) += v;
        o.y(a, b) += std::complex<double>(0, -v);
        o.y(b, a) += std::complex<double>(0, v);
      }
    }
  }
  return o;
}

// Transitions of a 3×3 probe Hamiltonian labeled by the |m=0> component, via Eigen's solver.
inline std::pair<double, double> sorted_transitions(const Eigen::MatrixXcd& hm) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
  int k0 = 0;
  for (int k = 1; k < 3; ++k)
    if (std::norm(es.eigenvectors()(1, k)) > std::norm(es.eigenvectors()(1, k0))) k0 = k;
  std::vector<double> f;
  for (int k = 0; k < 3; ++k)
    if (k != k0) f.push_back(std::abs(es.eigenvalues()(k) - es.eigenvalues()(k0)) / h);
  if (f[0] > f[1]) std::swap(f[0], f[1]);
  return {f[0], f[1]};
}

}  // namespace oracle
