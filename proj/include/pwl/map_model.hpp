#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pwl/types.hpp"

namespace pwl {

// Partition atoms. A region is the conjunction of its atoms; every catalog
// region needs at most two (T9 combines a border side with a sign of x).
template <int N>
struct HalfSpace {
  Vec<N> normal;
  Scalar offset = 0;   // compares normal.dot(X) against offset
  bool less = true;    // true: normal.dot(X) < offset defines the open region

  bool open(const Vec<N>& x) const {
    const Scalar v = normal.dot(x);
    return less ? v < offset : v > offset;
  }
  bool closed(const Vec<N>& x) const {
    const Scalar v = normal.dot(x);
    return less ? v <= offset : v >= offset;
  }
};

// Disc boundary x^2 + y^2 = r^2 (2D only).
struct Disc {
  Scalar radius_sq = 1;
  bool inside = true;

  bool open(const Vec2& x) const {
    const Scalar q = x.squaredNorm();
    return inside ? q < radius_sq : q > radius_sq;
  }
  bool closed(const Vec2& x) const {
    const Scalar q = x.squaredNorm();
    return inside ? q <= radius_sq : q >= radius_sq;
  }
};

// Pair of parallel lines |y - x| = h (2D only).
struct Band {
  Scalar half_width = 1;
  bool inside = true;

  bool open(const Vec2& x) const {
    const Scalar q = std::abs(x[1] - x[0]);
    return inside ? q < half_width : q > half_width;
  }
  bool closed(const Vec2& x) const {
    const Scalar q = std::abs(x[1] - x[0]);
    return inside ? q <= half_width : q >= half_width;
  }
};

template <int N>
using Atom = std::variant<HalfSpace<N>, Disc, Band>;

template <int N>
struct Region {
  std::vector<Atom<N>> atoms;
  std::string label;  // "L", "R", "R1", "R2"

  bool closed_contains(const Vec<N>& x) const {
    for (const auto& a : atoms) {
      const bool ok = std::visit(
          [&](const auto& atom) {
            if constexpr (std::is_same_v<std::decay_t<decltype(atom)>, HalfSpace<N>>) {
              return atom.closed(x);
            } else if constexpr (N == 2) {
              return atom.closed(x);
            } else {
              return false;  // Disc/Band are 2D-only; never built for N != 2
            }
          },
          a);
      if (!ok) return false;
    }
    return true;
  }
};

template <int N>
struct LinearPiece {
  Mat<N> A = Mat<N>::Identity();
  Vec<N> b = Vec<N>::Zero();  // zero except for the translated variant
};

// Piecewise-linear map: ordered (region, piece) pairs sharing the origin as
// fixed point (unless a piece carries an offset). Points on a boundary join
// the last listed region whose closure contains them, so for two-piece maps
// the boundary belongs to the second region.
template <int N>
class PwlMap {
 public:
  PwlMap() = default;
  PwlMap(std::vector<Region<N>> regions, std::vector<LinearPiece<N>> pieces)
      : regions_(std::move(regions)), pieces_(std::move(pieces)) {
    if (regions_.empty() || regions_.size() != pieces_.size())
      throw std::invalid_argument("PwlMap: regions and pieces must align");
  }

  static constexpr int dim = N;

  int piece_count() const { return static_cast<int>(pieces_.size()); }
  const Region<N>& region(int i) const { return regions_[i]; }
  const LinearPiece<N>& piece(int i) const { return pieces_[i]; }
  const std::string& label(int i) const { return regions_[i].label; }

  std::string id;                                        // catalog id, empty for ad-hoc maps
  std::vector<std::pair<std::string, Scalar>> params;    // catalog parameters, insertion order

 private:
  std::vector<Region<N>> regions_;
  std::vector<LinearPiece<N>> pieces_;
};

using PwlMap1 = PwlMap<1>;
using PwlMap2 = PwlMap<2>;
using PwlMap3 = PwlMap<3>;

template <int N>
int region_of(const PwlMap<N>& map, const Vec<N>& x) {
  for (int i = map.piece_count() - 1; i >= 0; --i) {
    if (map.region(i).closed_contains(x)) return i;
  }
  throw std::domain_error("region_of: point not covered by any region");
}

template <int N>
Vec<N> apply_piece(const PwlMap<N>& map, int region, const Vec<N>& x) {
  const auto& p = map.piece(region);
  return p.A * x + p.b;
}

template <int N>
std::pair<Vec<N>, int> evaluate(const PwlMap<N>& map, const Vec<N>& x) {
  const int r = region_of(map, x);
  return {apply_piece(map, r, x), r};
}

// One iteration step; returns the image and reports the region applied.
template <int N>
Vec<N> step(const PwlMap<N>& map, const Vec<N>& x, int& region) {
  region = region_of(map, x);
  return apply_piece(map, region, x);
}

// Turns a region-index itinerary into its label string ("RRRRL", "R1R2L", ...).
template <int N>
std::string itinerary_string(const PwlMap<N>& map, const std::vector<RegionId>& itin) {
  std::string s;
  s.reserve(itin.size());
  for (RegionId r : itin) s += map.label(r);
  return s;
}

// All rank-1 preimages of y: X = A_i^{-1} (y - b_i) kept when X lies in
// region i. Zero-determinant pieces are reported, not inverted.
template <int N>
struct PreimageResult {
  struct Hit {
    Vec<N> point;
    int region;
  };
  std::vector<Hit> preimages;
  std::vector<int> singular_pieces;
};

template <int N>
PreimageResult<N> rank1_preimages(const PwlMap<N>& map, const Vec<N>& y,
                                  Scalar det_tol = 1e-14) {
  PreimageResult<N> out;
  for (int i = 0; i < map.piece_count(); ++i) {
    const auto& p = map.piece(i);
    const Scalar det = p.A.determinant();
    if (std::abs(det) <= det_tol) {
      out.singular_pieces.push_back(i);
      continue;
    }
    const Vec<N> x = p.A.inverse() * (y - p.b);
    if (region_of(map, x) == i) out.preimages.push_back({x, i});
  }
  return out;
}

}  // namespace pwl
