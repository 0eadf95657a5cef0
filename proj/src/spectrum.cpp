#include "spinprobe/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "spinprobe/diagnostics.hpp"
#include "spinprobe/rng.hpp"

namespace spinprobe {

void SpectrumConfig::validate() const {
  if (!(f_step > 0.0)) throw std::invalid_argument("spectrum: f_step must be > 0");
  if (!(f_stop > f_start)) throw std::invalid_argument("spectrum: f_stop must exceed f_start");
  if (!(linewidth_fwhm > 0.0)) throw std::invalid_argument("spectrum: linewidth must be > 0");
  if (!(contrast >= 0.0 && contrast < 1.0)) throw std::invalid_argument("spectrum: contrast must lie in [0, 1)");
  if (!(baseline_counts > 0.0)) throw std::invalid_argument("spectrum: baseline counts must be > 0");
}

std::size_t SpectrumConfig::points() const {
  return static_cast<std::size_t>(std::floor((f_stop - f_start) / f_step + 1e-9)) + 1;
}

double mean_counts(double f, std::span<const double> resonances, const SpectrumConfig& cfg) {
  double dip = 0.0;
  for (double f0 : resonances) dip += cfg.contrast * lorentzian(f, f0, cfg.linewidth_fwhm);
  return cfg.baseline_counts * (1.0 - dip);
}

Spectrum synthesize(std::span<const double> resonances, const SpectrumConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.points();
  bool any_inside = resonances.empty();
  for (double f0 : resonances)
    if (f0 >= cfg.f_start && f0 <= cfg.frequency(n - 1)) any_inside = true;
  if (!any_inside) diag::warn("synthesize: no resonance inside the sweep window; spectrum is flat");

  Spectrum s;
  s.frequencies.resize(n);
  s.counts.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = cfg.frequency(k);
    const double mean = std::max(0.0, mean_counts(f, resonances, cfg));
    s.frequencies[k] = f;
    if (cfg.noiseless) {
      s.counts[k] = mean;
    } else {
      rng::CounterStream stream(cfg.seed, k);
      s.counts[k] = static_cast<double>(rng::poisson(mean, stream));
    }
  }
  return s;
}

Spectrum synthesize(const ResonancePair& resonances, const SpectrumConfig& cfg) {
  const double f[2] = {resonances.f_minus, resonances.f_plus};
  return synthesize(std::span<const double>(f, 2), cfg);
}

}  // namespace spinprobe
