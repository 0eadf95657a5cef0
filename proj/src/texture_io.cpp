#include "spinprobe/texture_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "spinprobe/diagnostics.hpp"
#include "spinprobe/errors.hpp"
#include "spinprobe/text.hpp"

namespace spinprobe {

namespace {
constexpr double kRenormalizeTolerance = 1e-3;
}

void write_texture(std::ostream& out, const SpinTexture& tex, const std::vector<std::string>& comments) {
  if (tex.empty()) throw std::invalid_argument("write_texture: texture has no sites");
  const auto& first = tex.sites().front();
  for (const auto& s : tex.sites())
    if (s.spin_mag != first.spin_mag || s.g != first.g)
      throw std::invalid_argument("write_texture: spintex 1 needs a uniform spin magnitude and g-factor");

  using text::format_exact;
  const auto& meta = tex.meta();
  out << "spintex 1\n";
  for (const auto& c : comments) out << "# " << c << '\n';
  if (meta.type != LatticeType::custom)
    out << "# nearest_neighbor_angstrom " << format_exact(meta.nearest_neighbor()) << '\n';
  out << "lattice " << to_string(meta.type) << '\n'
      << "a_angstrom " << format_exact(meta.a) << '\n'
      << "nx " << meta.nx << '\n'
      << "ny " << meta.ny << '\n'
      << "spin_magnitude " << format_exact(first.spin_mag) << '\n'
      << "g_factor " << format_exact(first.g) << '\n';
  for (const auto& s : tex.sites()) {
    out << format_exact(s.position.x()) << ' ' << format_exact(s.position.y()) << ' ' << format_exact(s.position.z())
        << ' ' << format_exact(s.spin_dir.x()) << ' ' << format_exact(s.spin_dir.y()) << ' '
        << format_exact(s.spin_dir.z()) << '\n';
  }
}

void save_texture(const SpinTexture& tex, const std::filesystem::path& path, const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_texture(out, tex, comments);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

SpinTexture read_texture(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty file", 0);
  ++line_no;
  {
    const auto tok = text::split_ws(text::strip_comment(line));
    if (tok.size() != 2 || tok[0] != "spintex") throw ParseError("expected 'spintex 1' magic line", line_no);
    if (tok[1] != "1") throw ParseError("unsupported spintex version '" + std::string(tok[1]) + "'", line_no);
  }

  std::map<std::string, std::string, std::less<>> header;
  struct RawSite {
    Vec3 pos, dir;
    std::size_t line;
  };
  std::vector<RawSite> raw;

  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = text::split_ws(text::strip_comment(line));
    if (tok.empty()) continue;
    const auto first = tok.front();
    if (first == "lattice" || first == "a_angstrom" || first == "nx" || first == "ny" || first == "spin_magnitude" ||
        first == "g_factor") {
      if (tok.size() != 2) throw ParseError("header '" + std::string(first) + "' takes exactly one value", line_no);
      if (!raw.empty()) throw ParseError("header '" + std::string(first) + "' after site lines", line_no);
      if (!header.emplace(std::string(first), std::string(tok[1])).second)
        throw ParseError("duplicate header '" + std::string(first) + "'", line_no);
      continue;
    }
    if (tok.size() != 6) throw ParseError("site line needs 6 numbers, found " + std::to_string(tok.size()), line_no);
    double v[6];
    for (int k = 0; k < 6; ++k) {
      const auto parsed = text::parse_double(tok[static_cast<std::size_t>(k)]);
      if (!parsed || !std::isfinite(*parsed))
        throw ParseError("invalid number '" + std::string(tok[static_cast<std::size_t>(k)]) + "'", line_no);
      v[k] = *parsed;
    }
    raw.push_back({Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5]), line_no});
  }

  auto require = [&](std::string_view key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) throw ParseError("missing header '" + std::string(key) + "'", 0);
    return it->second;
  };
  auto number = [&](std::string_view key) {
    const auto v = text::parse_double(require(key));
    if (!v || !std::isfinite(*v)) throw ParseError("header '" + std::string(key) + "' is not a number", 0);
    return *v;
  };
  auto integer = [&](std::string_view key) {
    const auto v = text::parse_int(require(key));
    if (!v) throw ParseError("header '" + std::string(key) + "' is not an integer", 0);
    return static_cast<int>(*v);
  };

  LatticeMeta meta;
  try {
    meta.type = parse_lattice_type(require("lattice"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
  if (meta.type != LatticeType::custom || header.count("a_angstrom")) meta.a = number("a_angstrom");
  if (meta.type != LatticeType::custom || header.count("nx")) meta.nx = integer("nx");
  if (meta.type != LatticeType::custom || header.count("ny")) meta.ny = integer("ny");
  const double spin_mag = number("spin_magnitude");
  const double g = number("g_factor");
  if (spin_mag < 0.0) throw ParseError("spin_magnitude must be >= 0", 0);

  if (raw.empty()) throw ParseError("texture has no sites", line_no);
  if (meta.type != LatticeType::custom) {
    if (meta.a <= 0.0 || meta.nx < 1 || meta.ny < 1) throw ParseError("lattice header values out of range", 0);
    const auto expected = static_cast<std::size_t>(meta.nx) * static_cast<std::size_t>(meta.ny) *
                          static_cast<std::size_t>(meta.basis_size());
    if (raw.size() != expected)
      throw ParseError("expected " + std::to_string(expected) + " sites for this lattice, found " +
                           std::to_string(raw.size()),
                       raw.back().line);
  }

  std::vector<SampleSite> sites;
  sites.reserve(raw.size());
  for (auto& r : raw) {
    if (spin_mag > 0.0) {
      const double n = r.dir.norm();
      const double dev = std::abs(n - 1.0);
      if (dev > kRenormalizeTolerance)
        throw ParseError("spin direction has norm " + text::format_sig(n, 6) + ", expected a unit vector", r.line);
      if (dev > SpinTexture::kUnitTolerance) {
        diag::warn("line " + std::to_string(r.line) + ": spin direction renormalized (norm " + text::format_sig(n, 9) +
                   ")");
        r.dir /= n;
      }
    }
    sites.push_back({r.pos, r.dir, spin_mag, g});
  }
  for (std::size_t a = 0; a < raw.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if ((raw[a].pos - raw[b].pos).norm() <= SpinTexture::kMinSeparation)
        throw ParseError("duplicate site (within 0.1 A of the site on line " + std::to_string(raw[b].line) + ")",
                         raw[a].line);

  try {
    return SpinTexture(std::move(sites), meta);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

SpinTexture load_texture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  return read_texture(in);
}

}  // namespace spinprobe
