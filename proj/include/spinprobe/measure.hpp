#pragma once

#include <cstdint>
#include <vector>

#include "spinprobe/execution.hpp"
#include "spinprobe/fit.hpp"
#include "spinprobe/scan.hpp"
#include "spinprobe/spectrum.hpp"

namespace spinprobe {

struct MeasuredMap {
  ResonanceMap fitted;              // f_minus/f_plus replaced by fitted centers
  std::vector<double> err_minus;    // |fitted − true|, GHz
  std::vector<double> err_plus;
  std::vector<std::uint8_t> failed; // 1 where a fit did not converge

  double error(std::size_t i) const { return std::max(err_minus[i], err_plus[i]); }
  std::size_t failures() const;
};

/// Half-width of the synthesized window around each resonance, in linewidths.
inline constexpr double kMeasureWindowLinewidths = 20.0;

/// Synthesize and fit the spectrum of one pixel; pixel seed = cfg.seed XOR pixel index.
/// Fitted values come back sorted as (f_minus, f_plus).
FitResult measure_pixel(const ResonancePair& truth, const SpectrumConfig& cfg, std::uint64_t pixel_index,
                        ResonancePair& fitted, bool& ok);

/// Emulated optical readout of every pixel.  Fit failures are recorded, not thrown.
MeasuredMap measure_map(const ResonanceMap& map, const SpectrumConfig& cfg, const Execution& exec = {});

}  // namespace spinprobe
