#include "spinprobe/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "spinprobe/errors.hpp"
#include "spinprobe/text.hpp"

namespace spinprobe::io {

namespace {

using text::format_sig;

void put_comments(std::ostream& out, const Comments& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
}

void map_row(std::ostream& out, const ResonanceMap& map, std::size_t i) {
  const std::size_t ix = i % map.grid.nx, iy = i / map.grid.nx;
  out << format_sig(map.grid.x(ix)) << ',' << format_sig(map.grid.y(iy)) << ',' << format_sig(map.f_minus[i]) << ','
      << format_sig(map.f_plus[i]) << ',' << format_sig(map.shift(i));
}

}  // namespace

void write_map_csv(std::ostream& out, const ResonanceMap& map, const Comments& comments) {
  put_comments(out, comments);
  out << "x_angstrom,y_angstrom,f_minus_ghz,f_plus_ghz,shift_ghz\n";
  for (std::size_t i = 0; i < map.size(); ++i) {
    map_row(out, map, i);
    out << '\n';
  }
}

void write_measured_csv(std::ostream& out, const MeasuredMap& m, const Comments& comments) {
  put_comments(out, comments);
  out << "x_angstrom,y_angstrom,f_minus_ghz,f_plus_ghz,shift_ghz,err_minus_ghz,err_plus_ghz,fit_failed\n";
  for (std::size_t i = 0; i < m.fitted.size(); ++i) {
    map_row(out, m.fitted, i);
    out << ',' << format_sig(m.err_minus[i]) << ',' << format_sig(m.err_plus[i]) << ',' << int(m.failed[i]) << '\n';
  }
}

void write_pgm(std::ostream& out, const ResonanceMap& map, const Comments& comments) {
  const auto values = map.values();
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = values.empty() ? 0.0 : *lo_it;
  const double hi = values.empty() ? 0.0 : *hi_it;
  const double span = hi - lo;
  out << "P2\n";
  put_comments(out, comments);
  out << "# value_min_ghz " << format_sig(lo) << "\n# value_max_ghz " << format_sig(hi) << '\n';
  out << map.grid.nx << ' ' << map.grid.ny << "\n65535\n";
  for (std::size_t row = 0; row < map.grid.ny; ++row) {
    const std::size_t iy = map.grid.ny - 1 - row;
    for (std::size_t ix = 0; ix < map.grid.nx; ++ix) {
      const double v = values[map.grid.index(ix, iy)];
      const long level = span > 0.0 ? std::lround((v - lo) / span * 65535.0) : 0;
      out << (ix ? " " : "") << std::clamp(level, 0L, 65535L);
    }
    out << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepCurve& c, const Comments& comments) {
  put_comments(out, comments);
  out << "r_angstrom,J_uev,Edd_uev,Bstray_T,f_ghz\n";
  for (std::size_t k = 0; k < c.r.size(); ++k)
    out << format_sig(c.r[k]) << ',' << format_sig(c.j_ex[k]) << ',' << format_sig(c.e_dd[k]) << ','
        << format_sig(c.b_stray[k]) << ',' << format_sig(c.f_res[k]) << '\n';
}

void write_height_csv(std::ostream& out, const HeightMap& h, const Comments& comments) {
  put_comments(out, comments);
  out << "x_angstrom,y_angstrom,z_angstrom\n";
  for (std::size_t i = 0; i < h.z.size(); ++i) {
    const std::size_t ix = i % h.grid.nx, iy = i / h.grid.nx;
    out << format_sig(h.grid.x(ix)) << ',' << format_sig(h.grid.y(iy)) << ',' << format_sig(h.z[i]) << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s, const Comments& comments) {
  put_comments(out, comments);
  out << "f_ghz,counts\n";
  for (std::size_t k = 0; k < s.counts.size(); ++k) out << format_sig(s.frequencies[k]) << ',' << format_sig(s.counts[k]) << '\n';
}

void write_fit_report(std::ostream& out, const FitResult& fit, const Comments& comments) {
  put_comments(out, comments);
  out << "n_peaks = " << fit.peaks.size() << '\n'
      << "converged = " << (fit.converged ? "true" : "false") << '\n'
      << "iterations = " << fit.iterations << '\n'
      << "baseline_counts = " << format_sig(fit.baseline) << '\n'
      << "residual_norm = " << format_sig(fit.residual_norm) << '\n';
  for (std::size_t k = 0; k < fit.peaks.size(); ++k) {
    const auto& p = fit.peaks[k];
    const std::string key = "peak" + std::to_string(k) + "_";
    out << key << "center_ghz = " << format_sig(p.center) << '\n'
        << key << "center_stderr_ghz = " << format_sig(p.center_stderr) << '\n'
        << key << "fwhm_ghz = " << format_sig(p.fwhm) << '\n'
        << key << "contrast = " << format_sig(p.contrast) << '\n';
  }
}

void write_conditioning_report(std::ostream& out, const ReconstructionResult& r, const Comments& comments) {
  put_comments(out, comments);
  const auto& c = r.conditioning;
  out << "sigma_max = " << format_sig(c.sigma_max) << '\n'
      << "sigma_min = " << format_sig(c.sigma_min) << '\n'
      << "condition_number = " << format_sig(c.cond) << '\n'
      << "rank_deficient = " << (c.rank_deficient ? "true" : "false") << '\n'
      << "lambda = " << format_sig(r.lambda) << '\n'
      << "iterations = " << r.iterations << '\n'
      << "converged = " << (r.converged ? "true" : "false") << '\n'
      << "residual_norm = " << format_sig(r.residual_norm) << '\n';
}

void write_moments(std::ostream& out, const SpinTexture& tex, const RVector& m, const Comments& comments) {
  put_comments(out, comments);
  const bool two_basis = tex.meta().basis_size() == 2;
  for (std::size_t k = 0; k < tex.size(); ++k) {
    const auto idx = lattice_index(tex.meta(), k);
    const int ix = two_basis ? 2 * idx.i + idx.basis : idx.i;
    out << ix << ' ' << idx.j << ' ' << format_sig(m(static_cast<Eigen::Index>(k))) << '\n';
  }
}

std::vector<MapSample> read_map_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool with_shift = false;
  std::vector<MapSample> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(text::strip_comment(line));
    if (body.empty()) continue;
    const auto fields = text::split(body, ',');
    if (!have_header) {
      if (fields.size() < 4 || fields[0] != "x_angstrom" || fields[1] != "y_angstrom" || fields[2] != "f_minus_ghz" ||
          fields[3] != "f_plus_ghz")
        throw ParseError("expected map header 'x_angstrom,y_angstrom,f_minus_ghz,f_plus_ghz'", line_no);
      with_shift = fields.size() >= 5 && fields[4] == "shift_ghz";
      have_header = true;
      continue;
    }
    const std::size_t need = with_shift ? 5 : 4;
    if (fields.size() < need) throw ParseError("map row has too few columns", line_no);
    double v[5] = {};
    for (std::size_t k = 0; k < need; ++k) {
      const auto parsed = text::parse_double(fields[k]);
      if (!parsed || !std::isfinite(*parsed)) throw ParseError("invalid number '" + std::string(fields[k]) + "'", line_no);
      v[k] = *parsed;
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], with_shift});
  }
  if (!have_header) throw ParseError("map file has no header", line_no);
  if (rows.empty()) throw ParseError("map file has no rows", line_no);
  return rows;
}

std::vector<MapSample> read_map_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  return read_map_csv(in);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << body;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace spinprobe::io
