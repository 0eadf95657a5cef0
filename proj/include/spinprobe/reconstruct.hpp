#pragma once

#include <span>
#include <vector>

#include "spinprobe/execution.hpp"
#include "spinprobe/linalg.hpp"
#include "spinprobe/scan.hpp"
#include "spinprobe/texture.hpp"

namespace spinprobe {

struct ForwardOptions {
  InteractionMode mode = InteractionMode::exchange;
  double probe_g = units::kElectronG;
  ExchangePrefactor prefactor = ExchangePrefactor::rydberg;
};

/// Linear map from per-site m_z to the axial resonance shift Δf at each tip position.
struct ForwardOperator {
  RMatrix a;                 // pixels × sites, GHz per unit m_z
  std::vector<Vec3> tips;    // Å
  std::vector<Vec3> sites;   // Å
  double height = 0.0;
  InteractionMode mode = InteractionMode::exchange;
};

/// Throws std::invalid_argument unless every spin is along ±ẑ (or has zero magnitude).
void require_collinear_z(const SpinTexture& tex);

/// m_z = spin_mag · spin_dir.z per site.
RVector site_moments(const SpinTexture& tex);

/// Exchange rows: J(|r|)/h.  Dipolar rows: g_probe μ_B B_z(r)/h for a unit ẑ moment.  Both: the sum.
ForwardOperator build_forward(const SpinTexture& tex, std::span<const Vec3> tips, const ForwardOptions& opts,
                              const Execution& exec = {});
ForwardOperator build_forward(const SpinTexture& tex, const GridSpec& grid, double height, const ForwardOptions& opts,
                              const Execution& exec = {});

struct ConditioningReport {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double cond = 1.0;           // +inf when σ_min is zero at working precision
  bool rank_deficient = false;
};

/// Singular values from the Jacobi eigensolve of AᵀA.  Limited to 200 columns.
ConditioningReport conditioning_report(const RMatrix& a);

/// Smallest right singular vector and ‖A m‖ / ‖A‖ for it.
struct NullWitness {
  RVector m;
  double ratio = 0.0;
};
NullWitness near_null_witness(const RMatrix& a);

struct ReconstructionResult {
  RVector m;
  double residual_norm = 0.0;  // ‖A m − y‖
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  ConditioningReport conditioning;
};

/// Minimizes ‖A m − y‖² + λ‖m‖² by conjugate gradients on the normal equations.
ReconstructionResult solve_tikhonov(const RMatrix& a, const RVector& y, double lambda);

struct LCurvePoint {
  double lambda = 0.0;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
};

/// Tabulates (residual, norm) over a λ grid; does not pick a λ.
std::vector<LCurvePoint> l_curve(const RMatrix& a, const RVector& y, std::span<const double> lambdas);

}  // namespace spinprobe
