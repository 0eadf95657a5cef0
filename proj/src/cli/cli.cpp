#include "spinprobe/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "config_echo.hpp"
#include "spinprobe/diagnostics.hpp"
#include "spinprobe/errors.hpp"
#include "spinprobe/io.hpp"
#include "spinprobe/measure.hpp"
#include "spinprobe/reconstruct.hpp"
#include "spinprobe/scan.hpp"
#include "spinprobe/spectrum.hpp"
#include "spinprobe/text.hpp"
#include "spinprobe/texture_io.hpp"
#include "spinprobe/units.hpp"

namespace spinprobe::cli {

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string prefactor = "rydberg";
  std::string convention = "transition";
  double d = 14.4;
  double probe_g = units::kElectronG;
  int threads = 0;
  std::string backend = "openmp";

  Execution execution() const {
    return backend == "serial" ? Execution::serial() : Execution::parallel(threads);
  }
  // Worker count and backend never change results, so they are not echoed.
  void echo(ConfigEcho& e) const {
    e.add("seed", static_cast<long long>(seed))
        .add("exchange-prefactor", prefactor)
        .add("convention", convention)
        .add("D", d)
        .add("probe-g", probe_g);
  }
  ProbeSpec probe() const {
    ProbeSpec p;
    p.D = d;
    p.g = probe_g;
    return p;
  }
};

std::vector<double> parse_numbers(const std::string& s, std::size_t count, const char* what) {
  std::vector<double> out;
  for (auto field : text::split(s, ',')) {
    const auto v = text::parse_double(field);
    if (!v || !std::isfinite(*v)) throw std::invalid_argument(std::string(what) + ": bad number '" + std::string(field) + "'");
    out.push_back(*v);
  }
  if (count && out.size() != count)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(count) + " comma-separated numbers");
  return out;
}

Vec3 parse_vec3(const std::string& s, const char* what) {
  const auto v = parse_numbers(s, 3, what);
  return {v[0], v[1], v[2]};
}

std::optional<Range> parse_range(const std::string& s, const char* what) {
  if (s.empty()) return std::nullopt;
  const auto v = parse_numbers(s, 2, what);
  if (!(v[1] > v[0])) throw std::invalid_argument(std::string(what) + ": upper bound must exceed lower bound");
  return Range{v[0], v[1]};
}

CLI::Validator vec_check(std::size_t count) {
  return CLI::Validator(
      [count](std::string& s) -> std::string {
        try {
          parse_numbers(s, count, "value");
        } catch (const std::exception& e) {
          return e.what();
        }
        return {};
      },
      count == 3 ? "X,Y,Z" : "LO,HI");
}

void emit(const std::string& path, std::ostream& out, const std::string& body) {
  if (path.empty())
    out << body;
  else
    io::write_file(path, body);
}

template <typename Writer>
std::string render(Writer&& w) {
  std::ostringstream s;
  w(s);
  return s.str();
}

// Options shared by the raster commands.
struct RasterOptions {
  std::string texture;
  double height = 4.0;
  double step = 0.25;
  std::string xrange, yrange;
  std::string mode = "exchange";
  std::string bext = "0,0,0";

  void add_to(CLI::App* app, bool with_height) {
    app->add_option("--texture", texture, "Input spintex file")->required();
    if (with_height) app->add_option("--height", height, "Tip height above the sample plane (Å)");
    app->add_option("--step", step, "Pixel step (Å)");
    app->add_option("--xrange", xrange, "Scan x range LO,HI (Å); default is the texture extent padded by 2 Å")
        ->check(vec_check(2));
    app->add_option("--yrange", yrange, "Scan y range LO,HI (Å)")->check(vec_check(2));
    app->add_option("--mode", mode, "Interaction mode")->check(CLI::IsMember({"dipolar", "exchange", "both"}));
    app->add_option("--bext", bext, "External field BX,BY,BZ (T)")->check(vec_check(3));
  }

  ScanConfig config(const Globals& g, const SpinTexture& tex) const {
    ScanConfig c;
    c.height = height;
    c.step = step;
    c.mode = parse_mode(mode);
    c.b_ext = parse_vec3(bext, "--bext");
    c.probe = g.probe();
    c.exchange_prefactor = parse_prefactor(g.prefactor);
    c.convention = parse_convention(g.convention);
    const auto [lo, hi] = tex.bounding_box();
    constexpr double pad = 2.0;
    c.x_range = parse_range(xrange, "--xrange").value_or(Range{lo.x() - pad, hi.x() + pad});
    c.y_range = parse_range(yrange, "--yrange").value_or(Range{lo.y() - pad, hi.y() + pad});
    return c;
  }

  void echo(ConfigEcho& e, const ScanConfig& c) const {
    e.add("texture", texture)
        .add("step", c.step)
        .add("xrange", text::format_exact(c.x_range.lo) + "," + text::format_exact(c.x_range.hi))
        .add("yrange", text::format_exact(c.y_range.lo) + "," + text::format_exact(c.y_range.hi))
        .add("mode", mode)
        .add("bext", c.b_ext);
  }
};

struct SpectrumFlags {
  double fstart = 0.0, fstop = 10.0, fstep = 0.02;
  double fwhm = 0.1, contrast = 0.1, counts = 1e5;
  bool noiseless = false;

  void add_to(CLI::App* app, bool with_window) {
    if (with_window) {
      app->add_option("--fstart", fstart, "Sweep start (GHz)");
      app->add_option("--fstop", fstop, "Sweep stop (GHz)");
    }
    app->add_option("--fstep", fstep, "Sweep step (GHz)");
    app->add_option("--fwhm", fwhm, "Lorentzian FWHM (GHz)");
    app->add_option("--contrast", contrast, "Fractional dip depth per resonance");
    app->add_option("--counts", counts, "Mean photon counts per point off resonance");
    app->add_flag("--noiseless", noiseless, "Store exact mean counts");
  }

  SpectrumConfig config(const Globals& g) const {
    SpectrumConfig c;
    c.f_start = fstart;
    c.f_stop = fstop;
    c.f_step = fstep;
    c.linewidth_fwhm = fwhm;
    c.contrast = contrast;
    c.baseline_counts = counts;
    c.seed = g.seed;
    c.noiseless = noiseless;
    c.validate();
    return c;
  }

  void echo(ConfigEcho& e, bool with_window) const {
    if (with_window) e.add("fstart", fstart).add("fstop", fstop);
    e.add("fstep", fstep).add("fwhm", fwhm).add("contrast", contrast).add("counts", counts).add("noiseless", noiseless);
  }
};

// --- texture -----------------------------------------------------------------

struct TextureCmd {
  std::string lattice = "square";
  double a = 0.0;
  int nx = 5, ny = 5;
  std::string pattern = "fm";
  std::string dir = "0,0,1";
  double mag = 0.5, g = 2.0;
  std::string out;

  void add_to(CLI::App* app) {
    app->add_option("--lattice", lattice, "Lattice type")->check(CLI::IsMember({"square", "honeycomb", "triangular"}));
    app->add_option("--a", a, "Lattice constant (Å)")->required();
    app->add_option("--nx", nx, "Cells along a1");
    app->add_option("--ny", ny, "Cells along a2");
    app->add_option("--pattern", pattern, "Spin pattern")->check(CLI::IsMember({"fm", "afm-neel", "stripe"}));
    app->add_option("--dir", dir, "Spin direction X,Y,Z")->check(vec_check(3));
    app->add_option("--mag", mag, "Spin magnitude");
    app->add_option("--g", g, "Sample g-factor");
    app->add_option("--out", out, "Output spintex file (default stdout)");
  }

  int run(const Globals&, std::ostream& os) const {
    Vec3 d = parse_vec3(dir, "--dir");
    if (d.norm() == 0.0) throw std::invalid_argument("--dir must be nonzero");
    d.normalize();
    const auto geometry = build_lattice(parse_lattice_type(lattice), a, nx, ny);
    const auto tex = apply_pattern(geometry, parse_pattern(pattern), d, mag, g);
    ConfigEcho e("texture");
    e.add("lattice", lattice).add("a", a).add("nx", nx).add("ny", ny).add("pattern", pattern).add("dir", d);
    e.add("mag", mag).add("g", g);
    emit(out, os, render([&](std::ostream& s) { write_texture(s, tex, e.lines()); }));
    return ok;
  }
};

// --- sweep -------------------------------------------------------------------

struct SweepCmd {
  double rmin = 2.0, rmax = 100.0;
  int points = 200;
  bool log = false;
  double sample_g = 2.0, spin = 0.5;
  std::string out;

  void add_to(CLI::App* app) {
    app->add_option("--rmin", rmin, "Smallest distance (Å)");
    app->add_option("--rmax", rmax, "Largest distance (Å)");
    app->add_option("--points", points, "Number of distances (>= 2)");
    app->add_flag("--log", log, "Logarithmic spacing");
    app->add_option("--sample-g", sample_g, "Sample g-factor");
    app->add_option("--spin", spin, "Sample spin magnitude");
    app->add_option("--out", out, "Output CSV (default stdout)");
  }

  int run(const Globals& g, std::ostream& os) const {
    if (points < 2) throw std::invalid_argument("--points must be at least 2");
    SweepOptions opts;
    opts.prefactor = parse_prefactor(g.prefactor);
    opts.probe_g = g.probe_g;
    opts.sample_g = sample_g;
    opts.sample_spin = spin;
    const auto curve = distance_sweep(rmin, rmax, static_cast<std::size_t>(points), log, opts);
    ConfigEcho e("sweep");
    g.echo(e);
    e.add("rmin", rmin).add("rmax", rmax).add("points", points).add("log", log).add("sample-g", sample_g).add("spin", spin);
    const std::string cross = "crossover_r_angstrom = " + (curve.crossover ? text::format_sig(*curve.crossover) : "none");
    if (out.empty()) {
      io::write_sweep_csv(os, curve, e.with(cross));
    } else {
      io::write_file(out, render([&](std::ostream& s) { io::write_sweep_csv(s, curve, e.lines()); }));
      os << cross << '\n';
    }
    return ok;
  }
};

// --- scan --------------------------------------------------------------------

struct ScanCmd {
  RasterOptions raster;
  SpectrumFlags spectrum;
  bool measure = false;
  std::string out, pgm;

  void add_to(CLI::App* app) {
    raster.add_to(app, true);
    app->add_flag("--measure", measure, "Replace exact resonances by fitted synthetic spectra");
    spectrum.add_to(app, false);
    app->add_option("--out", out, "Output map CSV (default stdout)");
    app->add_option("--pgm", pgm, "Also write a 16-bit PGM image");
  }

  int run(const Globals& g, std::ostream& os, std::ostream& err) const {
    const auto tex = load_texture(raster.texture);
    const auto cfg = raster.config(g, tex);
    ConfigEcho e("scan");
    g.echo(e);
    raster.echo(e, cfg);
    e.add("height", cfg.height).add("measure", measure);
    if (measure) spectrum.echo(e, false);
    const auto exec = g.execution();
    const auto map = scan_constant_height(cfg, tex, exec);
    if (measure) {
      const auto measured = measure_map(map, spectrum.config(g), exec);
      if (measured.failures())
        err << "warning: " << measured.failures() << " of " << map.size() << " pixel fits did not converge\n";
      emit(out, os, render([&](std::ostream& s) { io::write_measured_csv(s, measured, e.lines()); }));
      if (!pgm.empty()) io::write_file(pgm, render([&](std::ostream& s) { io::write_pgm(s, measured.fitted, e.lines()); }));
    } else {
      emit(out, os, render([&](std::ostream& s) { io::write_map_csv(s, map, e.lines()); }));
      if (!pgm.empty()) io::write_file(pgm, render([&](std::ostream& s) { io::write_pgm(s, map, e.lines()); }));
    }
    return ok;
  }
};

// --- isoscan -----------------------------------------------------------------

struct IsoscanCmd {
  RasterOptions raster;
  double fsource = 0.0;
  double zmin = ScanConfig::kMinHeight, zmax = 20.0;
  std::string out;

  void add_to(CLI::App* app) {
    raster.add_to(app, false);
    app->add_option("--fsource", fsource, "Fixed drive frequency (GHz)")->required();
    app->add_option("--zmin", zmin, "Lowest tip height searched (Å)");
    app->add_option("--zmax", zmax, "Highest tip height searched (Å)");
    app->add_option("--out", out, "Output height-map CSV (default stdout)");
  }

  int run(const Globals& g, std::ostream& os) const {
    const auto tex = load_texture(raster.texture);
    auto cfg = raster.config(g, tex);
    cfg.height = zmax;
    ConfigEcho e("isoscan");
    g.echo(e);
    raster.echo(e, cfg);
    e.add("fsource", fsource).add("zmin", zmin).add("zmax", zmax);
    const auto h = scan_iso_frequency(cfg, tex, fsource, zmin, zmax, g.execution());
    if (h.out_of_range)
      diag::warn("isoscan: " + std::to_string(h.out_of_range) + " of " + std::to_string(h.z.size()) +
                 " pixels have no resonance at " + text::format_sig(fsource) + " GHz in the height bracket");
    emit(out, os, render([&](std::ostream& s) { io::write_height_csv(s, h, e.lines()); }));
    return ok;
  }
};

// --- spectrum ----------------------------------------------------------------

struct SpectrumCmd {
  std::vector<double> resonances;
  std::string tip, texture;
  std::string mode = "exchange";
  std::string bext = "0,0,0";
  int peaks = 0;
  SpectrumFlags flags;
  std::string out, report;

  void add_to(CLI::App* app) {
    auto* list = app->add_option("--resonances", resonances, "Resonance centers F1,F2,... (GHz)")->delimiter(',');
    auto* t = app->add_option("--tip", tip, "Tip position X,Y,Z (Å); resonances computed from --texture")
                  ->check(vec_check(3));
    app->add_option("--texture", texture, "Input spintex file for --tip");
    list->excludes(t);
    app->add_option("--mode", mode, "Interaction mode for --tip")->check(CLI::IsMember({"dipolar", "exchange", "both"}));
    app->add_option("--bext", bext, "External field BX,BY,BZ (T) for --tip")->check(vec_check(3));
    app->add_option("--peaks", peaks, "Number of Lorentzians to fit (0: one per resolved resonance in the window)");
    flags.add_to(app, true);
    app->add_option("--out", out, "Output spectrum CSV (default stdout)");
    app->add_option("--report", report, "Output fit report (default stdout)");
  }

  int run(const Globals& g, std::ostream& os) const {
    const auto cfg = flags.config(g);
    ConfigEcho e("spectrum");
    g.echo(e);
    std::vector<double> centers = resonances;
    if (!tip.empty()) {
      if (texture.empty()) throw std::invalid_argument("--tip requires --texture");
      const auto tex = load_texture(texture);
      ScanConfig sc;
      sc.mode = parse_mode(mode);
      sc.b_ext = parse_vec3(bext, "--bext");
      sc.probe = g.probe();
      sc.exchange_prefactor = parse_prefactor(g.prefactor);
      const Vec3 p = parse_vec3(tip, "--tip");
      const auto pair = probe_resonances(probe_hamiltonian_at(p, tex, sc));
      centers = {pair.f_minus, pair.f_plus};
      e.add("texture", texture).add("tip", p).add("mode", mode).add("bext", sc.b_ext);
    } else if (centers.empty()) {
      throw std::invalid_argument("give --resonances or --tip with --texture");
    }
    std::sort(centers.begin(), centers.end());
    std::string listed;
    for (double c : centers) listed += (listed.empty() ? "" : ",") + text::format_exact(c);
    e.add("resonances", listed);
    flags.echo(e, true);

    std::size_t n_peaks = static_cast<std::size_t>(std::max(peaks, 0));
    if (n_peaks == 0) {
      double last = -INFINITY;
      for (double c : centers) {
        if (c < cfg.f_start || c > cfg.f_stop) continue;
        if (c - last > cfg.linewidth_fwhm) ++n_peaks;
        last = c;
      }
      if (n_peaks == 0) throw std::invalid_argument("no resonance inside the sweep window");
    }
    e.add("peaks", n_peaks);

    const auto spec = synthesize(centers, cfg);
    const auto fit = fit_lorentzians(spec, n_peaks);
    emit(out, os, render([&](std::ostream& s) { io::write_spectrum_csv(s, spec, e.lines()); }));
    emit(report, os, render([&](std::ostream& s) { io::write_fit_report(s, fit, e.lines()); }));
    if (!fit.converged) throw NumericalError("fit did not converge");
    return ok;
  }
};

// --- reconstruct -------------------------------------------------------------

struct ReconstructCmd {
  std::string texture, map;
  double height = 4.0;
  std::string mode = "exchange";
  double lambda = 1e-6;
  std::string out, report;

  void add_to(CLI::App* app) {
    app->add_option("--texture", texture, "Spintex file giving the site geometry")->required();
    app->add_option("--map", map, "Map CSV from scan")->required();
    app->add_option("--height", height, "Tip height of the map (Å)");
    app->add_option("--mode", mode, "Interaction mode of the map")->check(CLI::IsMember({"dipolar", "exchange", "both"}));
    app->add_option("--lambda", lambda, "Tikhonov regularization (>= 0)");
    app->add_option("--out", out, "Output per-site moments (default stdout)");
    app->add_option("--report", report, "Output conditioning report (default stdout)");
  }

  int run(const Globals& g, std::ostream& os) const {
    if (lambda < 0.0) throw std::invalid_argument("--lambda must be >= 0");
    const auto tex = load_texture(texture);
    const auto rows = io::read_map_csv(map);
    std::vector<Vec3> tips;
    RVector y(static_cast<Eigen::Index>(rows.size()));
    const double zero_field = units::energy_to_frequency(g.d);
    bool warned = false;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      tips.emplace_back(rows[k].x, rows[k].y, height);
      if (!rows[k].has_shift && !warned) {
        diag::warn("reconstruct: map has no shift_ghz column; using f_plus - D/h, which loses the sign of the shift");
        warned = true;
      }
      y(static_cast<Eigen::Index>(k)) = rows[k].has_shift ? rows[k].shift : rows[k].f_plus - zero_field;
    }
    ForwardOptions fo;
    fo.mode = parse_mode(mode);
    fo.probe_g = g.probe_g;
    fo.prefactor = parse_prefactor(g.prefactor);
    const auto op = build_forward(tex, tips, fo, g.execution());
    const auto result = solve_tikhonov(op.a, y, lambda);
    ConfigEcho e("reconstruct");
    g.echo(e);
    e.add("texture", texture).add("map", map).add("height", height).add("mode", mode).add("lambda", lambda);
    emit(out, os, render([&](std::ostream& s) { io::write_moments(s, tex, result.m, e.lines()); }));
    emit(report, os, render([&](std::ostream& s) { io::write_conditioning_report(s, result, e.lines()); }));
    if (!result.converged) throw NumericalError("conjugate gradient did not converge");
    return ok;
  }
};

class WarningsTo {
 public:
  explicit WarningsTo(std::ostream& err)
      : previous_(diag::set_warning_handler([&err](std::string_view m) { err << "warning: " << m << '\n'; })) {}
  ~WarningsTo() { diag::set_warning_handler(previous_); }
  WarningsTo(const WarningsTo&) = delete;
  WarningsTo& operator=(const WarningsTo&) = delete;

 private:
  diag::WarningHandler previous_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-defect scanning probe simulator", "spinprobe"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file: global keys first, then one [section] per command");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--exchange-prefactor", g.prefactor, "Exchange prefactor")->check(CLI::IsMember({"rydberg", "hartree"}));
  app.add_option("--convention", g.convention, "Map reading")->check(CLI::IsMember({"transition", "splitting"}));
  app.add_option("--D", g.d, "Probe zero-field splitting (μeV)");
  app.add_option("--probe-g", g.probe_g, "Probe g-factor");
  app.add_option("--threads", g.threads, "Worker threads (0: OpenMP default)");
  app.add_option("--backend", g.backend, "Loop backend")->check(CLI::IsMember({"serial", "openmp"}));

  TextureCmd texture;
  SweepCmd sweep;
  ScanCmd scan;
  IsoscanCmd isoscan;
  SpectrumCmd spectrum;
  ReconstructCmd reconstruct;
  auto* c_texture = app.add_subcommand("texture", "Build a lattice spin texture");
  auto* c_sweep = app.add_subcommand("sweep", "Exchange and dipolar coupling versus distance");
  auto* c_scan = app.add_subcommand("scan", "Constant-height resonance map");
  auto* c_isoscan = app.add_subcommand("isoscan", "Constant-frequency height map");
  auto* c_spectrum = app.add_subcommand("spectrum", "Synthetic spectrum and Lorentzian fit");
  auto* c_reconstruct = app.add_subcommand("reconstruct", "Invert a map for per-site moments");
  texture.add_to(c_texture);
  sweep.add_to(c_sweep);
  scan.add_to(c_scan);
  isoscan.add_to(c_isoscan);
  spectrum.add_to(c_spectrum);
  reconstruct.add_to(c_reconstruct);
  for (auto* c : app.get_subcommands({})) c->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ConfigError& e) {
    err << "error: config: " << e.what() << '\n';
    return input;
  } catch (const CLI::FileError& e) {
    err << "error: " << e.what() << '\n';
    return input;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return usage;
  }

  WarningsTo warnings(err);
  try {
    if (c_texture->parsed()) return texture.run(g, out);
    if (c_sweep->parsed()) return sweep.run(g, out);
    if (c_scan->parsed()) return scan.run(g, out, err);
    if (c_isoscan->parsed()) return isoscan.run(g, out);
    if (c_spectrum->parsed()) return spectrum.run(g, out);
    if (c_reconstruct->parsed()) return reconstruct.run(g, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return input;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return numerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return input;
  }
  return usage;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace spinprobe::cli
