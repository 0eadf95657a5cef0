#include <cmath>
#include <stdexcept>

#include "spinprobe/scan.hpp"
#include "spinprobe/units.hpp"

namespace spinprobe {

namespace {

double exchange_minus_dipolar(double r, const SweepOptions& opts) {
  return exchange_constant(r, opts.prefactor) - dipole_energy_scale(opts.probe_g, opts.sample_g, r);
}

}  // namespace

std::optional<double> exchange_dipolar_crossover(double lo, double hi, const SweepOptions& opts) {
  double f_lo = exchange_minus_dipolar(lo, opts);
  const double f_hi = exchange_minus_dipolar(hi, opts);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = exchange_minus_dipolar(mid, opts);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SweepCurve distance_sweep(double r_min, double r_max, std::size_t n_points, bool log_spacing,
                          const SweepOptions& opts) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("sweep: need 0 < r_min < r_max");
  if (n_points < 2) throw std::invalid_argument("sweep: need at least 2 points");

  SweepCurve c;
  const auto last = static_cast<double>(n_points - 1);
  const Vec3 spin(0.0, 0.0, opts.sample_spin);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double t = static_cast<double>(k) / last;
    double r = log_spacing ? r_min * std::pow(r_max / r_min, t) : r_min + (r_max - r_min) * t;
    if (k == n_points - 1) r = r_max;
    const double j = exchange_constant(r, opts.prefactor);
    c.r.push_back(r);
    c.j_ex.push_back(j);
    c.e_dd.push_back(dipole_energy_scale(opts.probe_g, opts.sample_g, r));
    // Tip on the spin axis: the displacement is parallel to the spin.
    c.b_stray.push_back(stray_field(Vec3(0.0, 0.0, r), spin, opts.sample_g).norm());
    c.f_res.push_back(units::energy_to_frequency(j));
  }
  c.crossover = exchange_dipolar_crossover(r_min, r_max, opts);
  return c;
}

}  // namespace spinprobe
