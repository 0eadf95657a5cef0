#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinprobe/linalg.hpp"

namespace spinprobe {

enum class LatticeType { square, honeycomb, triangular, custom };

std::string_view to_string(LatticeType t);
/// Throws std::invalid_argument for unknown names.
LatticeType parse_lattice_type(std::string_view name);

struct LatticeMeta {
  LatticeType type = LatticeType::custom;
  double a = 0.0;  // Å
  int nx = 0;
  int ny = 0;

  int basis_size() const { return type == LatticeType::honeycomb ? 2 : 1; }
  /// Nearest-neighbour distance implied by the construction (0 for custom).
  double nearest_neighbor() const;
};

/// Integer cell coordinates and basis index of a lattice site.
struct LatticeIndex {
  int i = 0;
  int j = 0;
  int basis = 0;
};

/// Positions in construction order: j outer, i inner, basis innermost.
struct LatticeGeometry {
  LatticeMeta meta;
  std::vector<Vec3> positions;
  std::vector<LatticeIndex> indices;
};

/// square: (i a, j a, 0).
/// triangular: a1 = (a, 0), a2 = (a/2, a√3/2); nearest neighbour a.
/// honeycomb: triangular Bravais lattice of constant a with basis (0,0) and (a/2, a/(2√3)); nearest neighbour a/√3.
LatticeGeometry build_lattice(LatticeType type, double a, int nx, int ny);

/// Recover the construction index of site `k` for a regular lattice.
LatticeIndex lattice_index(const LatticeMeta& meta, std::size_t k);

struct SampleSite {
  Vec3 position = Vec3::Zero();  // Å
  Vec3 spin_dir = Vec3::UnitZ();
  double spin_mag = 0.5;
  double g = 2.0;

  Vec3 spin() const { return spin_mag * spin_dir; }
};

class SpinTexture {
 public:
  static constexpr double kMinSeparation = 0.1;  // Å
  static constexpr double kUnitTolerance = 1e-9;

  SpinTexture() = default;
  /// Validates site invariants (unit directions, distinct positions); throws std::invalid_argument.
  SpinTexture(std::vector<SampleSite> sites, LatticeMeta meta);

  const std::vector<SampleSite>& sites() const noexcept { return sites_; }
  const LatticeMeta& meta() const noexcept { return meta_; }
  std::size_t size() const noexcept { return sites_.size(); }
  bool empty() const noexcept { return sites_.empty(); }

  /// Same spins, every position shifted by `offset`.
  SpinTexture translated(const Vec3& offset) const;

  /// (min, max) corners of the site positions.
  std::pair<Vec3, Vec3> bounding_box() const;

 private:
  std::vector<SampleSite> sites_;
  LatticeMeta meta_;
};

enum class Pattern { fm, afm_neel, stripe, custom };

std::string_view to_string(Pattern p);
Pattern parse_pattern(std::string_view name);

/// Per-site direction for Pattern::custom.
using PatternFunction = std::function<Vec3(const Vec3& position, const LatticeIndex& index)>;

/// FM: every site along `direction`.  AFM-Neel: sign (-1)^(i+j), or the sublattice sign on honeycomb.
/// Stripe: sign (-1)^i.  Custom: `fn` supplies each direction (normalized here).
SpinTexture apply_pattern(const LatticeGeometry& geometry, Pattern pattern, const Vec3& direction,
                          double spin_mag = 0.5, double g = 2.0, const PatternFunction& fn = {});

}  // namespace spinprobe
