#pragma once

#include <Eigen/Dense>
#include <complex>

namespace spinprobe {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Dense complex matrix that is Hermitian to within `kHermitianTolerance` (relative to its largest entry).
class HermitianMatrix {
 public:
  static constexpr double kHermitianTolerance = 1e-10;

  HermitianMatrix() = default;
  /// Throws std::invalid_argument when `m` is not square or not Hermitian.
  explicit HermitianMatrix(CMatrix m);

  static HermitianMatrix zero(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }
  Complex trace() const { return m_.trace(); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }

 private:
  struct Trusted {};
  HermitianMatrix(CMatrix m, Trusted) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Largest |A - A^H| entry divided by max(1, largest |A| entry).
double hermitian_defect(const CMatrix& m);

/// Kronecker product a ⊗ b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

}  // namespace spinprobe
