#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <random>

#include "oracle/oracle.hpp"
#include "spinprobe/errors.hpp"
#include "spinprobe/scan.hpp"
#include "spinprobe/units.hpp"

using namespace spinprobe;
using doctest::Approx;

namespace {

SpinTexture fm_square(double a = 3.0, int n = 5, Pattern p = Pattern::fm) {
  return apply_pattern(build_lattice(LatticeType::square, a, n, n), p, Vec3::UnitZ());
}

ScanConfig config(InteractionMode mode, double height, Range x, Range y, double step) {
  ScanConfig c;
  c.mode = mode;
  c.height = height;
  c.x_range = x;
  c.y_range = y;
  c.step = step;
  return c;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("grid construction") {
  const auto g = GridSpec::from_ranges({-2, 14}, {0, 1}, 0.25);
  CHECK(g.nx == 65);
  CHECK(g.ny == 5);
  CHECK(g.x(64) == Approx(14.0));
  const auto h = GridSpec::from_ranges({0, 12.5}, {0, 12.5}, 0.75);
  CHECK(h.nx == 17);
}

TEST_CASE("effective fields match a brute-force sum") {
  std::mt19937 gen(4);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<SampleSite> sites;
  for (int k = 0; k < 12; ++k) {
    SampleSite s;
    s.position = Vec3(3 * (k % 4), 3 * (k / 4), 0);
    s.spin_dir = Vec3(u(gen), u(gen), u(gen)).normalized();
    s.spin_mag = 1.0;
    s.g = 2.1;
    sites.push_back(s);
  }
  const SpinTexture tex(sites, {});
  for (int t = 0; t < 20; ++t) {
    const Vec3 tip(5 * u(gen) + 4, 5 * u(gen) + 3, 3 + std::abs(u(gen)));
    Vec3 b = Vec3::Zero(), bex = Vec3::Zero();
    for (const auto& s : sites) {
      const Vec3 r = tip - s.position;
      b += oracle::dipole_field(r, s.spin(), s.g);
      bex += oracle::exchange(r.norm()) * s.spin();
    }
    const auto f = effective_fields_at(tip, tex);
    CHECK((f.stray_t - b).norm() < 1e-12 * b.norm());
    CHECK((f.exchange_uev - bex).norm() < 1e-12 * bex.norm());
  }
  CHECK(effective_fields_at(Vec3(6, 6, 4), fm_square()).exchange_uev.z() ==
        Approx(oracle::center_exchange_5x5_uev).epsilon(1e-6));
}

TEST_CASE("fields superpose over texture subsets") {
  const auto tex = fm_square(3.0, 4, Pattern::afm_neel);
  std::vector<SampleSite> a(tex.sites().begin(), tex.sites().begin() + 7);
  std::vector<SampleSite> b(tex.sites().begin() + 7, tex.sites().end());
  const SpinTexture ta(a, {}), tb(b, {});
  const Vec3 tip(4.3, 2.2, 4.0);
  const auto all = effective_fields_at(tip, tex);
  const auto fa = effective_fields_at(tip, ta), fb = effective_fields_at(tip, tb);
  CHECK((all.stray_t - fa.stray_t - fb.stray_t).norm() < 1e-15);
  CHECK((all.exchange_uev - fa.exchange_uev - fb.exchange_uev).norm() < 1e-10);
}

TEST_CASE("exchange map extremes and translation invariance") {
  const auto tex = fm_square();
  const auto cfg = config(InteractionMode::exchange, 4.0, {-2, 14}, {-2, 14}, 0.5);
  const auto map = scan_constant_height(cfg, tex);
  const auto v = map.values();
  CHECK(*std::min_element(v.begin(), v.end()) == Approx(oracle::fm_exchange_min_ghz).epsilon(1e-4));
  CHECK(*std::max_element(v.begin(), v.end()) == Approx(oracle::fm_exchange_max_ghz).epsilon(1e-4));
  CHECK(map.zero_field_ghz == Approx(14.4 / oracle::h));
  for (std::size_t i = 0; i < map.size(); ++i) CHECK(map.shift(i) == Approx(map.to_plus[i] - map.zero_field_ghz));

  const Vec3 off(7.25, -3.5, 0);
  const auto moved = scan_constant_height(config(InteractionMode::exchange, 4.0, {5.25, 21.25}, {-5.5, 10.5}, 0.5),
                                          tex.translated(off));
  REQUIRE(moved.size() == map.size());
  double worst = 0;
  for (std::size_t i = 0; i < map.size(); ++i) worst = std::max(worst, std::abs(moved.f_plus[i] - map.f_plus[i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("a 90 degree rotation of a symmetric texture rotates the map") {
  const auto tex = fm_square();
  for (auto mode : {InteractionMode::exchange, InteractionMode::dipolar, InteractionMode::both}) {
    const auto map = scan_constant_height(config(mode, 4.0, {-1, 13}, {-1, 13}, 1.0), tex);
    REQUIRE(map.grid.nx == 15);
    const std::size_t n = 15;
    double worst = 0;
    for (std::size_t iy = 0; iy < n; ++iy)
      for (std::size_t ix = 0; ix < n; ++ix) {
        const double a = map.f_plus[map.grid.index(ix, iy)];
        const double b = map.f_plus[map.grid.index(n - 1 - iy, ix)];
        worst = std::max(worst, std::abs(a - b));
      }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("openmp and serial scans are bit-identical") {
  const auto tex = fm_square(3.0, 5, Pattern::afm_neel);
  auto cfg = config(InteractionMode::both, 4.0, {-2, 14}, {-2, 14}, 0.5);
  cfg.b_ext = Vec3(0.01, 0.0, 0.02);
  const auto ref = scan_constant_height(cfg, tex, Execution::serial());
  for (int threads : {1, 2, 3, 4, 7}) {
    CAPTURE(threads);
    const auto par = scan_constant_height(cfg, tex, Execution::parallel(threads));
    CHECK(same_bits(ref.f_plus, par.f_plus));
    CHECK(same_bits(ref.f_minus, par.f_minus));
    CHECK(same_bits(ref.to_plus, par.to_plus));
  }
}

TEST_CASE("dipolar-only map from an axial spin matches closed form on axis") {
  SampleSite s;
  const SpinTexture tex({s}, {});
  auto cfg = config(InteractionMode::dipolar, 10.0, {0, 0}, {0, 0}, 1.0);
  const auto map = scan_constant_height(cfg, tex);
  REQUIRE(map.size() == 1);
  const double bz = oracle::dipole_field(Vec3(0, 0, 10), Vec3(0, 0, 0.5), 2.0).z();
  const auto [plus, minus] = oracle::axial(14.4, units::kElectronG * oracle::mu_b * bz);
  CHECK(map.to_plus[0] == Approx(plus).epsilon(1e-12));
  CHECK(map.to_minus[0] == Approx(minus).epsilon(1e-12));
}

TEST_CASE("field recording and splitting convention") {
  auto cfg = config(InteractionMode::exchange, 4.0, {0, 3}, {0, 3}, 1.5);
  cfg.record_fields = true;
  cfg.convention = ResonanceConvention::splitting;
  const auto map = scan_constant_height(cfg, fm_square());
  REQUIRE(map.exchange_uev.size() == map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    CHECK(map.value(i) == Approx(2 * map.exchange_uev[i].z() / oracle::h).epsilon(1e-10));
    CHECK(map.value(i) == Approx(map.to_plus[i] - map.to_minus[i]).epsilon(1e-12));
  }
}

TEST_CASE("configuration validation") {
  auto cfg = config(InteractionMode::exchange, 0.5, {0, 1}, {0, 1}, 0.5);
  CHECK_THROWS_AS(scan_constant_height(cfg, fm_square()), std::invalid_argument);
  cfg.height = 4.0;
  cfg.step = 0.0;
  CHECK_THROWS(scan_constant_height(cfg, fm_square()));
  CHECK(parse_mode("both") == InteractionMode::both);
  CHECK_THROWS(parse_mode("magnetic"));
  CHECK(parse_prefactor("hartree") == ExchangePrefactor::hartree);
  CHECK(parse_convention("splitting") == ResonanceConvention::splitting);
}

TEST_CASE("pair mode agrees with mean field within the second-order bound") {
  SampleSite s;
  ScanConfig cfg;
  cfg.mode = InteractionMode::exchange;
  cfg.probe.g = 2.0;
  const double D = cfg.probe.D;
  for (double z : {6.0, 7.0, 8.0}) {
    CAPTURE(z);
    const Vec3 tip(0, 0, z);
    const double J = exchange_constant(z);
    const double bound = 2 * J * J / (D * oracle::h);
    const auto sectors = pair_mode_resonance(tip, s, cfg);
    REQUIRE(sectors.size() == 2);
    for (const auto& sec : sectors) {
      const auto mf = mean_field_sector(tip, s, sec.m_s, cfg);
      CHECK(std::abs(sec.transitions.to_plus - mf.to_plus) <= bound);
      CHECK(std::abs(sec.transitions.to_minus - mf.to_minus) <= bound);
    }
  }
  const auto six = pair_mode_resonance(Vec3(0, 0, 6), s, cfg);
  CHECK(six[0].m_s == 0.5);
  CHECK(six[0].transitions.to_plus == Approx(3.66405).epsilon(1e-5));
  CHECK(mean_field_sector(Vec3(0, 0, 6), s, 0.5, cfg).to_plus == Approx(3.64758).epsilon(1e-5));
  CHECK(six[1].transitions.to_plus == Approx(six[0].transitions.to_minus).epsilon(1e-9));
}

TEST_CASE("distance sweep") {
  const auto c = distance_sweep(2, 100, 200, true);
  REQUIRE(c.r.size() == 200);
  CHECK(c.r.front() == Approx(2.0));
  CHECK(c.r.back() == Approx(100.0));
  CHECK(c.r[1] / c.r[0] == Approx(c.r[199] / c.r[198]).epsilon(1e-9));
  const auto it = std::min_element(c.r.begin(), c.r.end(), [](double a, double b) { return std::abs(a - 3) < std::abs(b - 3); });
  const auto k = static_cast<std::size_t>(it - c.r.begin());
  CHECK(c.f_res[k] == Approx(units::energy_to_frequency(exchange_constant(c.r[k]))).epsilon(1e-12));
  CHECK(c.e_dd[k] == Approx(oracle::dipolar_energy(c.r[k])).epsilon(1e-12));
  REQUIRE(c.crossover.has_value());
  CHECK(*c.crossover == Approx(oracle::crossover_g2_angstrom).epsilon(1e-6));
  SweepOptions o;
  o.probe_g = 2.0023;
  CHECK(exchange_dipolar_crossover(5, 7, o).value() == Approx(oracle::crossover_g2e_angstrom).epsilon(1e-6));
  CHECK_FALSE(exchange_dipolar_crossover(8, 20).has_value());
  CHECK_THROWS(distance_sweep(2, 100, 1, false));
  CHECK_THROWS(distance_sweep(5, 2, 10, false));
}

TEST_CASE("iso-frequency scan is self-consistent") {
  const auto tex = fm_square();
  auto cfg = config(InteractionMode::exchange, 4.0, {0, 12}, {0, 12}, 1.5);
  const auto at4 = scan_constant_height(cfg, tex);
  auto values = at4.f_plus;
  std::nth_element(values.begin(), values.begin() + values.size() / 2, values.end());
  const double median = values[values.size() / 2];
  const auto hm = scan_iso_frequency(cfg, tex, median, 2.0, 10.0);
  std::size_t in_range = 0;
  for (std::size_t i = 0; i < hm.z.size(); ++i) {
    if (std::isnan(hm.z[i])) continue;
    ++in_range;
    auto check = cfg;
    check.height = hm.z[i];
    check.x_range = {hm.grid.x(i % hm.grid.nx), hm.grid.x(i % hm.grid.nx)};
    check.y_range = {hm.grid.y(i / hm.grid.nx), hm.grid.y(i / hm.grid.nx)};
    CHECK(std::abs(scan_constant_height(check, tex).f_plus[0] - median) < 1e-3);
  }
  CHECK(in_range >= 1);
  CHECK(in_range + hm.out_of_range == hm.z.size());
  const auto none = scan_iso_frequency(cfg, tex, 1e5, 2.0, 10.0);
  CHECK(none.out_of_range == none.z.size());
  CHECK_THROWS(scan_iso_frequency(cfg, tex, 50, 0.5, 10.0));
  CHECK_THROWS(scan_iso_frequency(cfg, tex, 50, 5.0, 4.0));
}
