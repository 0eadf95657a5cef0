#include "spinprobe/reconstruct.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spinprobe/eigensolver.hpp"
#include "spinprobe/errors.hpp"
#include "spinprobe/units.hpp"

namespace spinprobe {

void require_collinear_z(const SpinTexture& tex) {
  for (std::size_t k = 0; k < tex.size(); ++k) {
    const auto& s = tex.sites()[k];
    if (s.spin_mag == 0.0) continue;
    if (std::abs(std::abs(s.spin_dir.z()) - 1.0) > 1e-9)
      throw std::invalid_argument("site " + std::to_string(k) +
                                  " is not along +z or -z; reconstruction inverts collinear z moments only "
                                  "(rebuild the texture with --dir 0,0,1)");
  }
}

RVector site_moments(const SpinTexture& tex) {
  RVector m(static_cast<Eigen::Index>(tex.size()));
  for (std::size_t k = 0; k < tex.size(); ++k) m(static_cast<Eigen::Index>(k)) = tex.sites()[k].spin().z();
  return m;
}

ForwardOperator build_forward(const SpinTexture& tex, std::span<const Vec3> tips, const ForwardOptions& opts,
                              const Execution& exec) {
  require_collinear_z(tex);
  ForwardOperator op;
  op.tips.assign(tips.begin(), tips.end());
  op.mode = opts.mode;
  op.height = tips.empty() ? 0.0 : tips.front().z();
  for (const auto& s : tex.sites()) op.sites.push_back(s.position);

  const auto rows = static_cast<Eigen::Index>(tips.size());
  const auto cols = static_cast<Eigen::Index>(tex.size());
  op.a.setZero(rows, cols);
  const Vec3 unit_z = Vec3::UnitZ();
  parallel_for(tips.size(), exec, [&](std::size_t p) {
    for (Eigen::Index i = 0; i < cols; ++i) {
      const auto& site = tex.sites()[static_cast<std::size_t>(i)];
      const Vec3 r = tips[p] - site.position;
      const double d = r.norm();
      if (d < kCoincidenceDistance) throw std::invalid_argument("forward: tip coincides with a sample site");
      double entry = 0.0;
      if (uses_exchange(opts.mode)) entry += units::energy_to_frequency(exchange_constant(d, opts.prefactor));
      if (uses_dipolar(opts.mode))
        entry += units::energy_to_frequency(opts.probe_g * units::kBohrMagneton * stray_field(r, unit_z, site.g).z());
      op.a(static_cast<Eigen::Index>(p), i) = entry;
    }
  });
  if (!op.a.allFinite()) throw NumericalError("forward: non-finite kernel entry");
  return op;
}

ForwardOperator build_forward(const SpinTexture& tex, const GridSpec& grid, double height, const ForwardOptions& opts,
                              const Execution& exec) {
  std::vector<Vec3> tips;
  tips.reserve(grid.size());
  for (std::size_t iy = 0; iy < grid.ny; ++iy)
    for (std::size_t ix = 0; ix < grid.nx; ++ix) tips.emplace_back(grid.x(ix), grid.y(iy), height);
  auto op = build_forward(tex, tips, opts, exec);
  op.height = height;
  return op;
}

ConditioningReport conditioning_report(const RMatrix& a) {
  if (a.cols() > 200) throw std::invalid_argument("conditioning_report: more than 200 sites");
  ConditioningReport rep;
  if (a.cols() == 0) return rep;
  const RMatrix ata = a.transpose() * a;
  const auto eig = eigensolve_symmetric(0.5 * (ata + ata.transpose()));
  const double lmax = std::max(0.0, eig.values(eig.values.size() - 1));
  const double lmin = std::max(0.0, eig.values(0));
  rep.sigma_max = std::sqrt(lmax);
  rep.sigma_min = std::sqrt(lmin);
  rep.cond = rep.sigma_min > 0.0 ? rep.sigma_max / rep.sigma_min : std::numeric_limits<double>::infinity();
  const double eps = std::numeric_limits<double>::epsilon();
  rep.rank_deficient = lmin <= static_cast<double>(a.cols()) * eps * lmax;
  return rep;
}

NullWitness near_null_witness(const RMatrix& a) {
  const RMatrix ata = a.transpose() * a;
  const auto eig = eigensolve_symmetric(0.5 * (ata + ata.transpose()));
  NullWitness w;
  w.m = eig.vectors.col(0).normalized();
  const double norm_a = std::sqrt(std::max(0.0, eig.values(eig.values.size() - 1)));
  w.ratio = norm_a > 0.0 ? (a * w.m).norm() / norm_a : 0.0;
  return w;
}

ReconstructionResult solve_tikhonov(const RMatrix& a, const RVector& y, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("tikhonov: lambda must be >= 0");
  if (a.rows() != y.size()) throw std::invalid_argument("tikhonov: data length does not match kernel rows");

  ReconstructionResult out;
  out.lambda = lambda;
  out.conditioning = conditioning_report(a);
  const Eigen::Index n = a.cols();
  RMatrix normal = a.transpose() * a;
  normal.diagonal().array() += lambda;
  const RVector rhs = a.transpose() * y;

  RVector m = RVector::Zero(n);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    out.m = m;
    out.residual_norm = y.norm();
    out.converged = true;
    return out;
  }

  constexpr double kRelativeResidual = 1e-10;
  const int max_iterations = 10 * static_cast<int>(n);
  RVector r = rhs;
  RVector p = r;
  double rr = r.squaredNorm();
  int it = 0;
  while (it < max_iterations && std::sqrt(rr) > kRelativeResidual * rhs_norm) {
    const RVector np = normal * p;
    const double pnp = p.dot(np);
    if (!(pnp > 0.0)) break;  // exhausted the non-null Krylov directions
    const double alpha = rr / pnp;
    m += alpha * p;
    r -= alpha * np;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    ++it;
  }
  out.m = m;
  out.iterations = it;
  out.converged = std::sqrt(rr) <= kRelativeResidual * rhs_norm;
  out.residual_norm = (a * m - y).norm();
  if (!m.allFinite()) throw NumericalError("tikhonov: non-finite solution");
  return out;
}

std::vector<LCurvePoint> l_curve(const RMatrix& a, const RVector& y, std::span<const double> lambdas) {
  std::vector<LCurvePoint> out;
  for (double lambda : lambdas) {
    const auto res = solve_tikhonov(a, y, lambda);
    out.push_back({lambda, res.residual_norm, res.m.norm()});
  }
  return out;
}

}  // namespace spinprobe
