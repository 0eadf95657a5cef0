#include "spinprobe/texture.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinprobe {

std::string_view to_string(LatticeType t) {
  switch (t) {
    case LatticeType::square: return "square";
    case LatticeType::honeycomb: return "honeycomb";
    case LatticeType::triangular: return "triangular";
    case LatticeType::custom: return "custom";
  }
  return "custom";
}

LatticeType parse_lattice_type(std::string_view name) {
  if (name == "square") return LatticeType::square;
  if (name == "honeycomb") return LatticeType::honeycomb;
  if (name == "triangular") return LatticeType::triangular;
  if (name == "custom") return LatticeType::custom;
  throw std::invalid_argument("unknown lattice type '" + std::string(name) + "'");
}

double LatticeMeta::nearest_neighbor() const {
  switch (type) {
    case LatticeType::square:
    case LatticeType::triangular: return a;
    case LatticeType::honeycomb: return a / std::sqrt(3.0);
    case LatticeType::custom: return 0.0;
  }
  return 0.0;
}

LatticeGeometry build_lattice(LatticeType type, double a, int nx, int ny) {
  if (type == LatticeType::custom) throw std::invalid_argument("build_lattice: custom lattices have no construction");
  if (!(a > 0.0)) throw std::invalid_argument("build_lattice: lattice constant must be > 0");
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_lattice: nx and ny must be >= 1");

  LatticeGeometry g;
  g.meta = {type, a, nx, ny};
  const double s3 = std::sqrt(3.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      switch (type) {
        case LatticeType::square:
          g.positions.emplace_back(i * a, j * a, 0.0);
          g.indices.push_back({i, j, 0});
          break;
        case LatticeType::triangular:
          g.positions.emplace_back(i * a + 0.5 * j * a, 0.5 * s3 * j * a, 0.0);
          g.indices.push_back({i, j, 0});
          break;
        case LatticeType::honeycomb: {
          const Vec3 cell(i * a + 0.5 * j * a, 0.5 * s3 * j * a, 0.0);
          g.positions.push_back(cell);
          g.indices.push_back({i, j, 0});
          g.positions.push_back(cell + Vec3(0.5 * a, a / (2.0 * s3), 0.0));
          g.indices.push_back({i, j, 1});
          break;
        }
        case LatticeType::custom: break;
      }
    }
  }
  return g;
}

LatticeIndex lattice_index(const LatticeMeta& meta, std::size_t k) {
  if (meta.type == LatticeType::custom || meta.nx < 1) return {static_cast<int>(k), 0, 0};
  const auto basis = static_cast<std::size_t>(meta.basis_size());
  const std::size_t cell = k / basis;
  const auto nx = static_cast<std::size_t>(meta.nx);
  return {static_cast<int>(cell % nx), static_cast<int>(cell / nx), static_cast<int>(k % basis)};
}

SpinTexture::SpinTexture(std::vector<SampleSite> sites, LatticeMeta meta) : sites_(std::move(sites)), meta_(meta) {
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    const auto& s = sites_[k];
    if (!s.position.allFinite() || !s.spin_dir.allFinite())
      throw std::invalid_argument("site " + std::to_string(k) + ": non-finite value");
    if (!(s.spin_mag >= 0.0)) throw std::invalid_argument("site " + std::to_string(k) + ": negative spin magnitude");
    if (s.spin_mag > 0.0 && std::abs(s.spin_dir.norm() - 1.0) > kUnitTolerance)
      throw std::invalid_argument("site " + std::to_string(k) + ": spin direction is not a unit vector");
  }
  for (std::size_t a = 0; a < sites_.size(); ++a)
    for (std::size_t b = a + 1; b < sites_.size(); ++b)
      if ((sites_[a].position - sites_[b].position).norm() <= kMinSeparation)
        throw std::invalid_argument("sites " + std::to_string(a) + " and " + std::to_string(b) +
                                    " are closer than 0.1 A");
}

SpinTexture SpinTexture::translated(const Vec3& offset) const {
  auto moved = sites_;
  for (auto& s : moved) s.position += offset;
  return SpinTexture(std::move(moved), meta_);
}

std::pair<Vec3, Vec3> SpinTexture::bounding_box() const {
  if (sites_.empty()) return {Vec3::Zero(), Vec3::Zero()};
  Vec3 lo = sites_.front().position, hi = lo;
  for (const auto& s : sites_) {
    lo = lo.cwiseMin(s.position);
    hi = hi.cwiseMax(s.position);
  }
  return {lo, hi};
}

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::fm: return "fm";
    case Pattern::afm_neel: return "afm-neel";
    case Pattern::stripe: return "stripe";
    case Pattern::custom: return "custom";
  }
  return "custom";
}

Pattern parse_pattern(std::string_view name) {
  if (name == "fm") return Pattern::fm;
  if (name == "afm-neel") return Pattern::afm_neel;
  if (name == "stripe") return Pattern::stripe;
  if (name == "custom") return Pattern::custom;
  throw std::invalid_argument("unknown pattern '" + std::string(name) + "'");
}

SpinTexture apply_pattern(const LatticeGeometry& geometry, Pattern pattern, const Vec3& direction, double spin_mag,
                          double g, const PatternFunction& fn) {
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw std::invalid_argument("apply_pattern: direction must be normalized");
  if (pattern != Pattern::fm && pattern != Pattern::custom && geometry.meta.type == LatticeType::custom)
    throw std::invalid_argument("apply_pattern: pattern '" + std::string(to_string(pattern)) +
                                "' needs integer lattice indexing");
  if (pattern == Pattern::custom && !fn) throw std::invalid_argument("apply_pattern: custom pattern needs a function");
  if (geometry.indices.size() != geometry.positions.size() && geometry.meta.type != LatticeType::custom)
    throw std::invalid_argument("apply_pattern: geometry has inconsistent index list");

  std::vector<SampleSite> sites;
  sites.reserve(geometry.positions.size());
  for (std::size_t k = 0; k < geometry.positions.size(); ++k) {
    const LatticeIndex idx = k < geometry.indices.size() ? geometry.indices[k] : LatticeIndex{static_cast<int>(k), 0, 0};
    Vec3 dir = direction;
    switch (pattern) {
      case Pattern::fm: break;
      case Pattern::afm_neel: {
        const int parity = geometry.meta.type == LatticeType::honeycomb ? idx.basis : idx.i + idx.j;
        if (parity % 2 != 0) dir = -dir;
        break;
      }
      case Pattern::stripe:
        if (idx.i % 2 != 0) dir = -dir;
        break;
      case Pattern::custom: {
        dir = fn(geometry.positions[k], idx);
        const double n = dir.norm();
        if (!(n > 0.0)) throw std::invalid_argument("apply_pattern: custom function returned a zero vector");
        dir /= n;
        break;
      }
    }
    sites.push_back({geometry.positions[k], dir, spin_mag, g});
  }
  return SpinTexture(std::move(sites), geometry.meta);
}

}  // namespace spinprobe
