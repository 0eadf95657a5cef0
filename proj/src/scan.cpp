#include "spinprobe/scan.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spinprobe/errors.hpp"
#include "spinprobe/units.hpp"

namespace spinprobe {

std::string_view to_string(Backend b) { return b == Backend::serial ? "serial" : "openmp"; }

std::string_view to_string(InteractionMode m) {
  switch (m) {
    case InteractionMode::dipolar: return "dipolar";
    case InteractionMode::exchange: return "exchange";
    case InteractionMode::both: return "both";
  }
  return "both";
}

std::string_view to_string(ResonanceConvention c) {
  return c == ResonanceConvention::transition ? "transition" : "splitting";
}

std::string_view to_string(ExchangePrefactor p) { return p == ExchangePrefactor::rydberg ? "rydberg" : "hartree"; }

InteractionMode parse_mode(std::string_view s) {
  if (s == "dipolar") return InteractionMode::dipolar;
  if (s == "exchange") return InteractionMode::exchange;
  if (s == "both") return InteractionMode::both;
  throw std::invalid_argument("unknown interaction mode '" + std::string(s) + "'");
}

ResonanceConvention parse_convention(std::string_view s) {
  if (s == "transition") return ResonanceConvention::transition;
  if (s == "splitting") return ResonanceConvention::splitting;
  throw std::invalid_argument("unknown resonance convention '" + std::string(s) + "'");
}

ExchangePrefactor parse_prefactor(std::string_view s) {
  if (s == "rydberg") return ExchangePrefactor::rydberg;
  if (s == "hartree") return ExchangePrefactor::hartree;
  throw std::invalid_argument("unknown exchange prefactor '" + std::string(s) + "'");
}

GridSpec GridSpec::from_ranges(const Range& x, const Range& y, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid: step must be > 0");
  if (!(x.hi >= x.lo) || !(y.hi >= y.lo)) throw std::invalid_argument("grid: range upper bound below lower bound");
  auto count = [step](const Range& r) {
    return static_cast<std::size_t>(std::floor((r.hi - r.lo) / step + 1e-9)) + 1;
  };
  return {x.lo, y.lo, step, count(x), count(y)};
}

void ScanConfig::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("scan: step must be > 0");
  if (!(height >= kMinHeight)) throw std::invalid_argument("scan: height must be >= 1 A");
  if (!(x_range.hi >= x_range.lo) || !(y_range.hi >= y_range.lo))
    throw std::invalid_argument("scan: range upper bound below lower bound");
  if (!b_ext.allFinite()) throw std::invalid_argument("scan: external field must be finite");
  probe.validate();
}

EffectiveFields effective_fields_at(const Vec3& tip, const SpinTexture& tex, ExchangePrefactor prefactor) {
  EffectiveFields out;
  for (const auto& site : tex.sites()) {
    const Vec3 r = tip - site.position;
    const double d = r.norm();
    if (d < kCoincidenceDistance) throw std::invalid_argument("tip coincides with a sample site");
    if (site.spin_mag == 0.0) continue;
    const Vec3 spin = site.spin();
    out.stray_t += stray_field(r, spin, site.g);
    out.exchange_uev += exchange_constant(d, prefactor) * spin;
  }
  return out;
}

namespace {

const SpinOperatorSet& spin_one() {
  static const SpinOperatorSet ops = spin_operators(1.0);
  return ops;
}

HermitianMatrix probe_hamiltonian(const EffectiveFields& f, const ScanConfig& cfg) {
  Vec3 field = cfg.b_ext;
  if (uses_dipolar(cfg.mode)) field += f.stray_t;
  HermitianMatrix h = zfs_hamiltonian(cfg.probe) + zeeman_hamiltonian(cfg.probe.g, field, spin_one());
  if (uses_exchange(cfg.mode)) h += HermitianMatrix(spin_one().dot(f.exchange_uev));
  return h;
}

}  // namespace

HermitianMatrix probe_hamiltonian_at(const Vec3& tip, const SpinTexture& tex, const ScanConfig& cfg) {
  return probe_hamiltonian(effective_fields_at(tip, tex, cfg.exchange_prefactor), cfg);
}

double reading(const BranchTransitions& t, ResonanceConvention c) {
  return c == ResonanceConvention::transition ? t.sorted().f_plus : t.splitting();
}

double ResonanceMap::value(std::size_t i) const {
  return convention == ResonanceConvention::transition ? f_plus[i] : std::abs(to_plus[i] - to_minus[i]);
}

std::vector<double> ResonanceMap::values() const {
  std::vector<double> v(size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = value(i);
  return v;
}

ResonanceMap scan_constant_height(const ScanConfig& cfg, const SpinTexture& tex, const Execution& exec) {
  cfg.validate();
  ResonanceMap map;
  map.grid = cfg.grid();
  map.height = cfg.height;
  map.mode = cfg.mode;
  map.convention = cfg.convention;
  map.zero_field_ghz = units::energy_to_frequency(cfg.probe.D);
  const std::size_t n = map.grid.size();
  map.f_minus.assign(n, 0.0);
  map.f_plus.assign(n, 0.0);
  map.to_plus.assign(n, 0.0);
  map.to_minus.assign(n, 0.0);
  if (cfg.record_fields) {
    map.stray_t.assign(n, Vec3::Zero());
    map.exchange_uev.assign(n, Vec3::Zero());
  }

  const auto& grid = map.grid;
  parallel_for(n, exec, [&](std::size_t i) {
    const std::size_t ix = i % grid.nx, iy = i / grid.nx;
    try {
      const Vec3 tip(grid.x(ix), grid.y(iy), cfg.height);
      const auto fields = effective_fields_at(tip, tex, cfg.exchange_prefactor);
      const auto t = probe_transitions(probe_hamiltonian(fields, cfg));
      const auto pair = t.sorted();
      if (!std::isfinite(pair.f_minus) || !std::isfinite(pair.f_plus)) throw NumericalError("non-finite resonance");
      map.f_minus[i] = pair.f_minus;
      map.f_plus[i] = pair.f_plus;
      map.to_plus[i] = t.to_plus;
      map.to_minus[i] = t.to_minus;
      if (cfg.record_fields) {
        map.stray_t[i] = fields.stray_t;
        map.exchange_uev[i] = fields.exchange_uev;
      }
    } catch (const std::exception& e) {
      throw PixelError(ix, iy, e.what());
    }
  });
  return map;
}

HeightMap scan_iso_frequency(const ScanConfig& cfg, const SpinTexture& tex, double f_source, double z_min,
                             double z_max, const Execution& exec) {
  cfg.validate();
  if (!std::isfinite(f_source)) throw std::invalid_argument("isoscan: source frequency must be finite");
  if (!(z_min >= ScanConfig::kMinHeight) || !(z_max > z_min))
    throw std::invalid_argument("isoscan: need 1 A <= z_min < z_max");

  constexpr double kFreqTolerance = 1e-3;    // GHz
  constexpr double kHeightTolerance = 1e-3;  // Å
  constexpr int kMaxIterations = 200;

  HeightMap out;
  out.grid = cfg.grid();
  out.f_source = f_source;
  out.z.assign(out.grid.size(), std::numeric_limits<double>::quiet_NaN());
  const auto& grid = out.grid;

  parallel_for(grid.size(), exec, [&](std::size_t i) {
    const std::size_t ix = i % grid.nx, iy = i / grid.nx;
    try {
      auto excess = [&](double z) {
        const Vec3 tip(grid.x(ix), grid.y(iy), z);
        return probe_resonances(probe_hamiltonian_at(tip, tex, cfg)).f_plus - f_source;
      };
      double lo = z_min, hi = z_max;
      double f_lo = excess(lo), f_hi = excess(hi);
      if (f_lo == 0.0) {
        out.z[i] = lo;
        return;
      }
      if (f_hi == 0.0) {
        out.z[i] = hi;
        return;
      }
      if ((f_lo > 0.0) == (f_hi > 0.0)) return;  // out of range
      double mid = 0.5 * (lo + hi), f_mid = excess(mid);
      for (int it = 0; it < kMaxIterations; ++it) {
        if (std::abs(f_mid) < kFreqTolerance && hi - lo < kHeightTolerance) break;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
        mid = 0.5 * (lo + hi);
        f_mid = excess(mid);
      }
      out.z[i] = mid;
    } catch (const std::exception& e) {
      throw PixelError(ix, iy, e.what());
    }
  });
  for (double z : out.z)
    if (std::isnan(z)) ++out.out_of_range;
  return out;
}

}  // namespace spinprobe
