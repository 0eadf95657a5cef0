#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spinprobe/linalg.hpp"
#include "spinprobe/spectrum.hpp"

namespace spinprobe {

struct PeakEstimate {
  double center = 0.0;    // GHz
  double fwhm = 0.0;      // GHz
  double contrast = 0.0;
  double center_stderr = 0.0;
};

struct FitResult {
  double baseline = 0.0;
  std::vector<PeakEstimate> peaks;  // ordered by center
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct FitOptions {
  int max_iterations = 200;
  double relative_step = 1e-9;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) fit of baseline·(1 − Σ c_k L(f; f_k, Γ_k)).
/// Without `initial_centers` the n deepest local minima seed the fit; coincident seeds are spread by one f_step.
/// Throws std::invalid_argument for n_peaks < 1 or fewer than 5·n_peaks points.
FitResult fit_lorentzians(const Spectrum& spectrum, std::size_t n_peaks,
                          std::optional<std::span<const double>> initial_centers = std::nullopt,
                          const FitOptions& opts = {});

/// Parameter layout [baseline, (contrast, fwhm, center) per peak], exposed for gradient checks.
namespace lorentz_model {

double value(double f, const RVector& params);
/// ∂value/∂params at f, written into `grad` (resized to params.size()).
void gradient(double f, const RVector& params, RVector& grad);

}  // namespace lorentz_model

}  // namespace spinprobe
