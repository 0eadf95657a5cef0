#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinprobe/texture.hpp"

// "spintex 1" texture files.
//
//   spintex 1
//   lattice <type>
//   a_angstrom <float>
//   nx <int>
//   ny <int>
//   spin_magnitude <float>
//   g_factor <float>
//   <x> <y> <z> <sx> <sy> <sz>      one line per site, (sx, sy, sz) a unit vector
//
// '#' starts a comment.  The format carries one spin magnitude and g-factor
// for the whole texture.
namespace spinprobe {

/// `comments` are written as '# ' lines right after the magic line.
void write_texture(std::ostream& out, const SpinTexture& tex, const std::vector<std::string>& comments = {});
void save_texture(const SpinTexture& tex, const std::filesystem::path& path,
                  const std::vector<std::string>& comments = {});

/// Throws ParseError (with line number) on malformed content.  Directions off unit length by at most
/// 1e-3 are renormalized with a warning.
SpinTexture read_texture(std::istream& in);
SpinTexture load_texture(const std::filesystem::path& path);

}  // namespace spinprobe
