#include "spinprobe/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spinprobe/errors.hpp"

namespace spinprobe {
namespace {

inline double conj_of(double x) { return x; }
inline Complex conj_of(const Complex& x) { return std::conj(x); }
inline double real_of(double x) { return x; }
inline double real_of(const Complex& x) { return x.real(); }

constexpr double kOffDiagonalTolerance = 1e-12;
constexpr int kMaxSweeps = 100;

template <typename Scalar>
EigenDecomposition<Scalar> jacobi(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);

  const double scale = a.norm();
  const double target = kOffDiagonalTolerance * std::max(scale, 1e-300);

  auto off_norm = [&] {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) sum += std::norm(Complex(a(i, j)));
    return std::sqrt(2.0 * sum);
  };

  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const double app = real_of(a(p, p));
        const double aqq = real_of(a(q, q));
        // Skip rotations that cannot change the diagonal in floating point.
        if (sweep > 3 && std::abs(app) + 1e3 * mag == std::abs(app) && std::abs(aqq) + 1e3 * mag == std::abs(aqq)) {
          a(p, q) = Scalar(0);
          a(q, p) = Scalar(0);
          continue;
        }
        // Phase d makes the (p,q) entry real, then a real rotation annihilates it.
        const Scalar d = conj_of(a(p, q)) / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Scalar vqp = -d * s;
        const Scalar vqq = d * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c + akq * vqp;
          a(k, q) = akp * s + akq * vqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + conj_of(vqp) * aqk;
          a(q, k) = s * apk + conj_of(vqq) * aqk;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = real_of(a(p, p));
        a(q, q) = real_of(a(q, q));
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c + vkq * vqp;
          v(k, q) = vkp * s + vkq * vqq;
        }
      }
    }
  }
  if (off_norm() > target) throw NumericalError("eigensolve: Jacobi iteration did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return real_of(a(i, i)) < real_of(a(j, j)); });

  EigenDecomposition<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values(k) = real_of(a(src, src));
    out.vectors.col(k) = v.col(src);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace

HermitianEigen eigensolve(const HermitianMatrix& h) {
  if (hermitian_defect(h.matrix()) > HermitianMatrix::kHermitianTolerance)
    throw std::invalid_argument("eigensolve: input is not Hermitian");
  return jacobi<Complex>(h.matrix());
}

SymmetricEigen eigensolve_symmetric(const RMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigensolve_symmetric: matrix is not square");
  if (a.size() > 0) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() / scale > 1e-10)
      throw std::invalid_argument("eigensolve_symmetric: input is not symmetric");
  }
  return jacobi<double>(a);
}

}  // namespace spinprobe
