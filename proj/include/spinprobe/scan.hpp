#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "spinprobe/execution.hpp"
#include "spinprobe/resonance.hpp"
#include "spinprobe/spin.hpp"
#include "spinprobe/texture.hpp"

namespace spinprobe {

enum class InteractionMode { dipolar, exchange, both };
enum class ResonanceConvention { transition, splitting };

std::string_view to_string(InteractionMode m);
std::string_view to_string(ResonanceConvention c);
std::string_view to_string(ExchangePrefactor p);
InteractionMode parse_mode(std::string_view s);
ResonanceConvention parse_convention(std::string_view s);
ExchangePrefactor parse_prefactor(std::string_view s);

inline bool uses_dipolar(InteractionMode m) { return m != InteractionMode::exchange; }
inline bool uses_exchange(InteractionMode m) { return m != InteractionMode::dipolar; }

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Raster: pixel (ix, iy) sits at (x0 + ix·step, y0 + iy·step); storage is row-major, iy outer.
struct GridSpec {
  double x0 = 0.0, y0 = 0.0, step = 1.0;
  std::size_t nx = 0, ny = 0;

  static GridSpec from_ranges(const Range& x, const Range& y, double step);
  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }
  double x(std::size_t ix) const { return x0 + static_cast<double>(ix) * step; }
  double y(std::size_t iy) const { return y0 + static_cast<double>(iy) * step; }
};

struct ScanConfig {
  static constexpr double kMinHeight = 1.0;  // Å

  double height = 4.0;  // Å above the sample plane
  Range x_range{0.0, 0.0};
  Range y_range{0.0, 0.0};
  double step = 0.25;
  InteractionMode mode = InteractionMode::exchange;
  Vec3 b_ext = Vec3::Zero();  // T
  ProbeSpec probe{};
  ExchangePrefactor exchange_prefactor = ExchangePrefactor::rydberg;
  ResonanceConvention convention = ResonanceConvention::transition;
  bool record_fields = false;

  /// Throws std::invalid_argument.
  void validate() const;
  GridSpec grid() const { return GridSpec::from_ranges(x_range, y_range, step); }
};

struct EffectiveFields {
  Vec3 stray_t = Vec3::Zero();       // Σ stray fields, T
  Vec3 exchange_uev = Vec3::Zero();  // Σ J_i <S_i>, μeV
};

/// Distance below which the tip counts as coincident with a site.
inline constexpr double kCoincidenceDistance = 0.1;  // Å

/// Mean-field sums over all sample sites.  Throws std::invalid_argument if the tip sits on a site.
EffectiveFields effective_fields_at(const Vec3& tip, const SpinTexture& tex,
                                    ExchangePrefactor prefactor = ExchangePrefactor::rydberg);

/// zfs + g μ_B (B_ext + B_stray)·S + b_ex·S, with the stray and exchange parts gated by cfg.mode.
HermitianMatrix probe_hamiltonian_at(const Vec3& tip, const SpinTexture& tex, const ScanConfig& cfg);

/// The scalar a map reports for one pixel under a convention: f_plus, or |E(+1) − E(−1)|/h.
double reading(const BranchTransitions& t, ResonanceConvention c);

struct ResonanceMap {
  GridSpec grid;
  double height = 0.0;
  InteractionMode mode = InteractionMode::exchange;
  ResonanceConvention convention = ResonanceConvention::transition;
  double zero_field_ghz = 0.0;  // D/h of the probe used

  std::vector<double> f_minus, f_plus;  // sorted pair per pixel, GHz
  std::vector<double> to_plus, to_minus;  // signed branch transitions, GHz
  std::vector<Vec3> stray_t, exchange_uev;  // filled when record_fields

  std::size_t size() const { return f_plus.size(); }
  /// Convention-dependent value at pixel i.
  double value(std::size_t i) const;
  std::vector<double> values() const;
  /// Signed axial shift to_plus − D/h.
  double shift(std::size_t i) const { return to_plus[i] - zero_field_ghz; }
  ResonancePair pair(std::size_t i) const { return {f_minus[i], f_plus[i]}; }
};

/// Constant-height raster.  Output is assembled by pixel index and identical for every backend.
ResonanceMap scan_constant_height(const ScanConfig& cfg, const SpinTexture& tex, const Execution& exec = {});

struct HeightMap {
  GridSpec grid;
  double f_source = 0.0;
  std::vector<double> z;  // Å, NaN where no root exists in [z_min, z_max]
  std::size_t out_of_range = 0;
};

/// Per pixel, the height where f_plus equals f_source (bisection to 1 MHz and 1e-3 Å).
HeightMap scan_iso_frequency(const ScanConfig& cfg, const SpinTexture& tex, double f_source, double z_min,
                             double z_max, const Execution& exec = {});

/// Transitions of the probe in one sample-spin sector.
struct SectorResonance {
  double m_s = 0.0;
  BranchTransitions transitions;
};

/// Exact diagonalization of probe ⊗ one sample spin (spin quantum number = site.spin_mag).
std::vector<SectorResonance> pair_mode_resonance(const Vec3& tip, const SampleSite& site, const ScanConfig& cfg);

/// Mean-field counterpart: the same site as a classical spin m_s ẑ.
BranchTransitions mean_field_sector(const Vec3& tip, const SampleSite& site, double m_s, const ScanConfig& cfg);

struct SweepOptions {
  ExchangePrefactor prefactor = ExchangePrefactor::rydberg;
  double probe_g = 2.0;
  double sample_g = 2.0;
  double sample_spin = 0.5;
};

struct SweepCurve {
  std::vector<double> r, j_ex, e_dd, b_stray, f_res;
  std::optional<double> crossover;  // Å, where J_ex = E_dd
};

/// Exchange constant, dipolar energy scale, on-axis stray field magnitude and J/h on an r grid.
SweepCurve distance_sweep(double r_min, double r_max, std::size_t n_points, bool log_spacing,
                          const SweepOptions& opts = {});

/// Bisection for J_ex(r) = E_dd(r) on [lo, hi]; nullopt without a sign change.
std::optional<double> exchange_dipolar_crossover(double lo, double hi, const SweepOptions& opts = {});

}  // namespace spinprobe
