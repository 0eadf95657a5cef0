#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spinprobe/resonance.hpp"

namespace spinprobe {

struct SpectrumConfig {
  double f_start = 0.0;         // GHz
  double f_stop = 10.0;         // GHz
  double f_step = 0.02;         // GHz
  double linewidth_fwhm = 0.1;  // GHz
  double contrast = 0.1;        // per peak
  double baseline_counts = 1e5; // mean photons per point
  std::uint64_t seed = 1;
  bool noiseless = false;       // counts = exact mean

  /// Throws std::invalid_argument.
  void validate() const;
  std::size_t points() const;
  double frequency(std::size_t k) const { return f_start + static_cast<double>(k) * f_step; }
};

struct Spectrum {
  std::vector<double> frequencies;  // GHz, strictly increasing
  std::vector<double> counts;       // integer-valued unless noiseless
};

/// Peak-normalized Lorentzian (Γ/2)² / ((f − f0)² + (Γ/2)²).
inline double lorentzian(double f, double center, double fwhm) {
  const double hw = 0.5 * fwhm;
  const double d = f - center;
  return hw * hw / (d * d + hw * hw);
}

/// baseline · (1 − Σ contrast · L(f; f_k, Γ)).
double mean_counts(double f, std::span<const double> resonances, const SpectrumConfig& cfg);

/// Photoluminescence trace.  Counts at point k are Poisson draws keyed by (cfg.seed, k).
/// Resonances outside the window give a flat spectrum and a warning.
Spectrum synthesize(std::span<const double> resonances, const SpectrumConfig& cfg);
Spectrum synthesize(const ResonancePair& resonances, const SpectrumConfig& cfg);

}  // namespace spinprobe
