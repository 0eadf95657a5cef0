#include "spinprobe/spin.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinprobe/diagnostics.hpp"

namespace spinprobe {

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("HermitianMatrix: matrix is not square");
  if (hermitian_defect(m_) > kHermitianTolerance) throw std::invalid_argument("HermitianMatrix: matrix is not Hermitian");
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) { return {CMatrix::Zero(dim, dim), Trusted{}}; }

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  if (o.dim() != dim()) throw std::invalid_argument("HermitianMatrix: dimension mismatch");
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

double hermitian_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SpinOperatorSet spin_operators(double s) {
  const double twice = 2.0 * s;
  if (!(twice >= 1.0) || std::abs(twice - std::round(twice)) > 1e-12)
    throw std::invalid_argument("spin_operators: s must be a positive half-integer, got " + std::to_string(s));

  const auto dim = static_cast<Eigen::Index>(std::lround(twice)) + 1;
  s = 0.5 * static_cast<double>(dim - 1);

  // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>; row k holds m = s - k.
  CMatrix splus = CMatrix::Zero(dim, dim);
  CMatrix sz = CMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double m = s - static_cast<double>(k);
    sz(k, k) = m;
    if (k > 0) splus(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  const CMatrix sminus = splus.adjoint();
  SpinOperatorSet ops;
  ops.s = s;
  ops.sx = 0.5 * (splus + sminus);
  ops.sy = Complex(0.0, -0.5) * (splus - sminus);
  ops.sz = sz;
  return ops;
}

void ProbeSpec::validate() const {
  if (!(D > 0.0) || !std::isfinite(D)) throw std::invalid_argument("probe: zero-field splitting D must be > 0");
  if (!std::isfinite(g)) throw std::invalid_argument("probe: g-factor must be finite");
}

HermitianMatrix zfs_hamiltonian(double D) {
  static const SpinOperatorSet ops = spin_operators(1.0);
  const CMatrix sz2 = ops.sz * ops.sz;
  return HermitianMatrix(D * (sz2 - (2.0 / 3.0) * ops.identity()));
}

HermitianMatrix zeeman_hamiltonian(double g, const Vec3& field_t, const SpinOperatorSet& ops) {
  return HermitianMatrix(g * units::kBohrMagneton * ops.dot(field_t));
}

double dipole_energy_scale(double g1, double g2, double r) {
  return g1 * g2 * units::kDipoleEnergyPerBohrMagneton2 / (r * r * r);
}

namespace {

double checked_norm(const Vec3& r, const char* who) {
  const double d = r.norm();
  if (!(d > 0.0)) throw std::invalid_argument(std::string(who) + ": zero separation");
  return d;
}

CMatrix heisenberg(const SpinOperatorSet& a, const SpinOperatorSet& b) {
  return kron(a.sx, b.sx) + kron(a.sy, b.sy) + kron(a.sz, b.sz);
}

}  // namespace

HermitianMatrix dipole_pair_hamiltonian(double g1, double g2, const Vec3& r, const SpinOperatorSet& ops1,
                                        const SpinOperatorSet& ops2) {
  const double d = checked_norm(r, "dipole_pair_hamiltonian");
  const Vec3 n = r / d;
  const CMatrix term = 3.0 * kron(ops1.dot(n), ops2.dot(n)) - heisenberg(ops1, ops2);
  return HermitianMatrix(-dipole_energy_scale(g1, g2, d) * term);
}

Vec3 stray_field(const Vec3& r, const Vec3& spin, double g) {
  const double d = checked_norm(r, "stray_field");
  const Vec3 n = r / d;
  const double prefactor = g * units::kDipoleFieldPerBohrMagneton / (d * d * d);
  return -prefactor * (3.0 * n * spin.dot(n) - spin);
}

double exchange_constant(double r, ExchangePrefactor prefactor) {
  if (!(r > 0.0)) throw std::invalid_argument("exchange_constant: distance must be > 0");
  if (r < 2.0)
    diag::warn_once("exchange-short-range",
                    "exchange_constant: r = " + std::to_string(r) +
                        " A is below 2 A, where the asymptotic exchange formula is unreliable");
  const double energy = prefactor == ExchangePrefactor::rydberg ? units::kRydberg : units::kHartree;
  const double x = r / units::kBohrRadius;
  return 1.641 * energy * x * x * std::sqrt(x) * std::exp(-2.0 * x);
}

HermitianMatrix exchange_pair_hamiltonian(double J, const SpinOperatorSet& ops1, const SpinOperatorSet& ops2) {
  return HermitianMatrix(J * heisenberg(ops1, ops2));
}

}  // namespace spinprobe
