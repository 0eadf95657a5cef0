#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinprobe/fit.hpp"
#include "spinprobe/measure.hpp"
#include "spinprobe/reconstruct.hpp"
#include "spinprobe/scan.hpp"
#include "spinprobe/spectrum.hpp"

// Output formats.  Every writer takes `comments`, emitted first as '# ' lines.
// Decimal values use 9 significant digits.
namespace spinprobe::io {

using Comments = std::vector<std::string>;

/// x_angstrom,y_angstrom,f_minus_ghz,f_plus_ghz,shift_ghz
void write_map_csv(std::ostream& out, const ResonanceMap& map, const Comments& comments = {});
/// Map columns followed by err_minus_ghz,err_plus_ghz,fit_failed
void write_measured_csv(std::ostream& out, const MeasuredMap& m, const Comments& comments = {});
/// 16-bit ASCII PGM of the map values, normalized to [min, max], top row = largest y.
void write_pgm(std::ostream& out, const ResonanceMap& map, const Comments& comments = {});
/// r_angstrom,J_uev,Edd_uev,Bstray_T,f_ghz
void write_sweep_csv(std::ostream& out, const SweepCurve& c, const Comments& comments = {});
/// x_angstrom,y_angstrom,z_angstrom with nan for out-of-range pixels
void write_height_csv(std::ostream& out, const HeightMap& h, const Comments& comments = {});
/// f_ghz,counts
void write_spectrum_csv(std::ostream& out, const Spectrum& s, const Comments& comments = {});
/// key = value lines
void write_fit_report(std::ostream& out, const FitResult& fit, const Comments& comments = {});
void write_conditioning_report(std::ostream& out, const ReconstructionResult& r, const Comments& comments = {});
/// ix iy m_z per site
void write_moments(std::ostream& out, const SpinTexture& tex, const RVector& m, const Comments& comments = {});

/// One row of a map CSV.
struct MapSample {
  double x = 0.0, y = 0.0, f_minus = 0.0, f_plus = 0.0;
  double shift = 0.0;
  bool has_shift = false;
};

/// Reads the map CSV written above (the shift column is optional).  Throws ParseError.
std::vector<MapSample> read_map_csv(std::istream& in);
std::vector<MapSample> read_map_csv(const std::filesystem::path& path);

/// Writes `body` to `path` through a temporary string so a failed write leaves no partial file.
void write_file(const std::filesystem::path& path, const std::string& body);

}  // namespace spinprobe::io
