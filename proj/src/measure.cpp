#include "spinprobe/measure.hpp"

#include <algorithm>
#include <cmath>


namespace spinprobe {

std::size_t MeasuredMap::failures() const {
  return static_cast<std::size_t>(std::count(failed.begin(), failed.end(), std::uint8_t{1}));
}

namespace {

struct Window {
  double lo, hi;
  std::vector<double> centers;
};

// One window per resonance, merged where they overlap.  Window edges sit on the global f_step grid.
std::vector<Window> windows_for(const ResonancePair& truth, const SpectrumConfig& cfg) {
  const double half = kMeasureWindowLinewidths * cfg.linewidth_fwhm;
  const double step = cfg.f_step;
  std::vector<Window> out;
  for (double f : {truth.f_minus, truth.f_plus}) {
    const double lo = std::max(0.0, std::floor((f - half) / step) * step);
    const double hi = std::ceil((f + half) / step) * step;
    if (!out.empty() && lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, hi);
      out.back().centers.push_back(f);
    } else {
      out.push_back({lo, hi, {f}});
    }
  }
  return out;
}

}  // namespace

FitResult measure_pixel(const ResonancePair& truth, const SpectrumConfig& cfg, std::uint64_t pixel_index,
                        ResonancePair& fitted, bool& ok) {
  const auto windows = windows_for(truth, cfg);
  const double all[2] = {truth.f_minus, truth.f_plus};
  std::vector<double> centers;
  FitResult last;
  ok = true;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    SpectrumConfig local = cfg;
    local.f_start = windows[w].lo;
    local.f_stop = windows[w].hi;
    // Separate windows get separate counter streams.
    local.seed = (cfg.seed ^ pixel_index) + 0x9E3779B97F4A7C15ull * w;
    const Spectrum s = synthesize(std::span<const double>(all, 2), local);
    last = fit_lorentzians(s, windows[w].centers.size());
    if (!last.converged) ok = false;
    for (const auto& pk : last.peaks) centers.push_back(pk.center);
  }
  std::sort(centers.begin(), centers.end());
  fitted = {centers.front(), centers.back()};
  return last;
}

MeasuredMap measure_map(const ResonanceMap& map, const SpectrumConfig& cfg, const Execution& exec) {
  cfg.validate();
  MeasuredMap out;
  out.fitted = map;
  const std::size_t n = map.size();
  out.err_minus.assign(n, 0.0);
  out.err_plus.assign(n, 0.0);
  out.failed.assign(n, 0);

  parallel_for(n, exec, [&](std::size_t i) {
    const ResonancePair truth = map.pair(i);
    ResonancePair fitted{};
    bool ok = false;
    try {
      measure_pixel(truth, cfg, static_cast<std::uint64_t>(i), fitted, ok);
    } catch (const std::exception&) {
      ok = false;
      fitted = {NAN, NAN};
    }
    out.fitted.f_minus[i] = fitted.f_minus;
    out.fitted.f_plus[i] = fitted.f_plus;
    // Carry the branch labels of the true map over to the fitted magnitudes.
    const bool plus_is_upper = std::abs(map.to_plus[i]) >= std::abs(map.to_minus[i]);
    const double upper = fitted.f_plus, lower = fitted.f_minus;
    out.fitted.to_plus[i] = std::copysign(plus_is_upper ? upper : lower, map.to_plus[i]);
    out.fitted.to_minus[i] = std::copysign(plus_is_upper ? lower : upper, map.to_minus[i]);
    out.err_minus[i] = std::abs(fitted.f_minus - truth.f_minus);
    out.err_plus[i] = std::abs(fitted.f_plus - truth.f_plus);
    out.failed[i] = ok && std::isfinite(fitted.f_minus) && std::isfinite(fitted.f_plus) ? 0 : 1;
  });
  return out;
}

}  // namespace spinprobe
