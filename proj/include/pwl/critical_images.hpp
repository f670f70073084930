#pragma once

#include <vector>

#include "pwl/map_model.hpp"

namespace pwl {

struct Segment2 {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  Scalar length() const { return (b - a).norm(); }
};

struct SegmentImage {
  Segment2 seg;
  int depth = 0;
  int parent = -1;  // index into the result list, -1 for the seed
};

struct CriticalImagesResult {
  std::vector<SegmentImage> segments;  // seed first, then by generation
  bool hull_stabilized = false;        // last generation added nothing outside the prior hull
};

// Forward images of a segment of the discontinuity set. Each generation maps
// the previous one piecewise, splitting segments exactly where they cross a
// region boundary (line-line / line-circle intersections); slivers shorter
// than min_len are dropped. Escape beyond r_div throws.
CriticalImagesResult critical_images(const PwlMap<2>& map, const Segment2& seed, int depth,
                                     Scalar r_div = 1e8, Scalar min_len = 1e-12);

}  // namespace pwl
