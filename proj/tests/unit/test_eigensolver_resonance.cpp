#include <doctest.h>

#include <random>

#include "oracle/oracle.hpp"
#include "spinprobe/eigensolver.hpp"
#include "spinprobe/resonance.hpp"
#include "spinprobe/spin.hpp"

using namespace spinprobe;
using doctest::Approx;

namespace {

HermitianMatrix random_hermitian(std::mt19937& gen, int n) {
  std::normal_distribution<double> nd;
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(nd(gen), nd(gen));
  return HermitianMatrix(CMatrix(0.5 * (m + m.adjoint())));
}

HermitianMatrix probe(double D, double g, const Vec3& b_t, const Vec3& b_ex_uev = Vec3::Zero()) {
  const auto ops = spin_operators(1.0);
  return zfs_hamiltonian(D) + zeeman_hamiltonian(g, b_t, ops) + HermitianMatrix(CMatrix(ops.dot(b_ex_uev)));
}

}  // namespace

TEST_CASE("jacobi matches the reference solver on random hermitian matrices") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 11;
    const auto h = random_hermitian(gen, n);
    const auto ours = eigensolve(h);
    Eigen::SelfAdjointEigenSolver<CMatrix> ref(h.matrix());
    CHECK((ours.values - ref.eigenvalues()).norm() < 1e-10 * (1 + ref.eigenvalues().norm()));
    CHECK(std::abs(ours.values.sum() - h.trace().real()) < 1e-10 * n);
    const CMatrix resid = h.matrix() * ours.vectors - ours.vectors * ours.values.asDiagonal();
    CHECK(resid.norm() < 1e-10 * (1 + h.matrix().norm()));
    CHECK((ours.vectors.adjoint() * ours.vectors - CMatrix::Identity(n, n)).norm() < 1e-10);
    for (int k = 1; k < n; ++k) CHECK(ours.values(k) >= ours.values(k - 1));
  }
}

TEST_CASE("jacobi on real symmetric input") {
  std::mt19937 gen(3);
  std::normal_distribution<double> nd;
  RMatrix a(9, 9);
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) a(r, c) = nd(gen);
  a = (a + a.transpose()).eval();
  const auto ours = eigensolve_symmetric(a);
  Eigen::SelfAdjointEigenSolver<RMatrix> ref(a);
  CHECK((ours.values - ref.eigenvalues()).norm() < 1e-10);
  RMatrix bad = a;
  bad(0, 1) += 1.0;
  CHECK_THROWS(eigensolve_symmetric(bad));
}

TEST_CASE("degenerate and diagonal input") {
  const auto d = eigensolve(HermitianMatrix(CMatrix(CMatrix::Identity(4, 4) * 2.0)));
  for (int k = 0; k < 4; ++k) CHECK(d.values(k) == Approx(2.0));
  CHECK(d.sweeps <= 1);
}

TEST_CASE("zero-field resonances") {
  const auto pair = probe_resonances(zfs_hamiltonian(14.4));
  CHECK(std::abs(pair.f_minus - 3.48190) < 1e-5);
  CHECK(std::abs(pair.f_plus - 14.4 / oracle::h) < 1e-9);
  CHECK(std::abs(pair.f_minus - 14.4 / oracle::h) < 1e-9);
}

TEST_CASE("axial field closed form for 100 random fields") {
  std::mt19937 gen(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double g = 2.0023, D = 14.4;
  for (int k = 0; k < 100; ++k) {
    const double bz = u(gen);
    const auto t = probe_transitions(probe(D, g, Vec3(0, 0, bz)));
    const auto [plus, minus] = oracle::axial(D, g * oracle::mu_b * bz);
    CHECK(t.to_plus == Approx(plus).epsilon(1e-10));
    CHECK(t.to_minus == Approx(minus).epsilon(1e-10));
    const auto s = t.sorted();
    CHECK(s.f_minus <= s.f_plus);
    CHECK(s.f_plus == Approx(std::max(std::abs(plus), std::abs(minus))).epsilon(1e-10));
    CHECK(t.splitting() == Approx(2 * std::abs(g * oracle::mu_b * bz) / oracle::h).epsilon(1e-10));
  }
}

TEST_CASE("exchange field enters like an axial field") {
  const auto t = probe_transitions(probe(14.4, 2.0023, Vec3::Zero(), Vec3(0, 0, 40.0)));
  CHECK(t.to_plus == Approx((14.4 + 40.0) / oracle::h).epsilon(1e-12));
  CHECK(t.to_minus == Approx((14.4 - 40.0) / oracle::h).epsilon(1e-12));
}

TEST_CASE("weak transverse field follows second-order perturbation theory") {
  const double D = 14.4, g = 2.0023;
  for (double bx : {1e-3, 3e-3, 1e-2}) {
    const double b = g * oracle::mu_b * bx;
    const auto s = probe_resonances(probe(D, g, Vec3(bx, 0, 0)));
    const auto [upper, lower] = oracle::transverse(D, b);
    const double tol = 10 * std::pow(b, 4) / std::pow(D, 3) / oracle::h;
    CHECK(std::abs(s.f_plus - upper) < tol);
    CHECK(std::abs(s.f_minus - lower) < tol);
  }
}

TEST_CASE("resonances agree with the reference solver for arbitrary fields") {
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Vec3 b(u(gen), u(gen), u(gen));
    const auto h = probe(14.4, 2.0023, b * 0.3);
    const auto s = probe_resonances(h);
    const auto [lo, hi] = oracle::sorted_transitions(h.matrix());
    CHECK(s.f_minus == Approx(lo).epsilon(1e-9));
    CHECK(s.f_plus == Approx(hi).epsilon(1e-9));
  }
}
