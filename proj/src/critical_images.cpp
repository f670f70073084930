#include "pwl/critical_images.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pwl {
namespace {

// Crossing parameters t in (0,1) of segment p + t*d with one atom's boundary.
void boundary_crossings(const Atom<2>& atom, const Vec2& p, const Vec2& d,
                        std::vector<Scalar>& ts) {
  auto line = [&](const Vec2& n, Scalar c) {
    const Scalar denom = n.dot(d);
    if (denom == 0) return;
    const Scalar t = (c - n.dot(p)) / denom;
    if (t > 0 && t < 1) ts.push_back(t);
  };
  if (const auto* hs = std::get_if<HalfSpace<2>>(&atom)) {
    line(hs->normal, hs->offset);
  } else if (const auto* disc = std::get_if<Disc>(&atom)) {
    // |p + t d|^2 = r^2
    const Scalar a = d.squaredNorm();
    if (a == 0) return;
    const Scalar b = 2 * p.dot(d);
    const Scalar c = p.squaredNorm() - disc->radius_sq;
    const Scalar q = b * b - 4 * a * c;
    if (q < 0) return;
    const Scalar root = std::sqrt(q);
    for (const Scalar t : {(-b - root) / (2 * a), (-b + root) / (2 * a)})
      if (t > 0 && t < 1) ts.push_back(t);
  } else if (const auto* band = std::get_if<Band>(&atom)) {
    const Vec2 n{-1, 1};
    line(n, band->half_width);
    line(n, -band->half_width);
  }
}

struct Hull {
  std::vector<Vec2> pts;  // counterclockwise, may degenerate to 1-2 points
};

Scalar cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

Hull convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) {
                          return a.x() == b.x() && a.y() == b.y();
                        }),
            pts.end());
  const size_t n = pts.size();
  if (n <= 2) return {pts};
  std::vector<Vec2> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper chain
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return {h};
}

Scalar dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const Scalar len2 = d.squaredNorm();
  if (len2 == 0) return (p - a).norm();
  const Scalar t = std::clamp((p - a).dot(d) / len2, Scalar(0), Scalar(1));
  return (p - (a + t * d)).norm();
}

Scalar dist_to_hull(const Vec2& p, const Hull& hull) {
  const auto& h = hull.pts;
  if (h.empty()) return std::numeric_limits<Scalar>::infinity();
  if (h.size() == 1) return (p - h[0]).norm();
  if (h.size() == 2) return dist_point_segment(p, h[0], h[1]);
  bool inside = true;
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (size_t i = 0; i < h.size(); ++i) {
    const Vec2& a = h[i];
    const Vec2& b = h[(i + 1) % h.size()];
    if (cross(a, b, p) < 0) inside = false;
    best = std::min(best, dist_point_segment(p, a, b));
  }
  return inside ? 0 : best;
}

}  // namespace

CriticalImagesResult critical_images(const PwlMap<2>& map, const Segment2& seed, int depth,
                                     Scalar r_div, Scalar min_len) {
  if (depth < 0) throw std::invalid_argument("critical_images: depth must be >= 0");
  CriticalImagesResult out;
  out.segments.push_back({seed, 0, -1});

  std::vector<Vec2> earlier = {seed.a, seed.b};  // endpoints of generations before the last
  std::vector<Vec2> last;

  size_t gen_begin = 0, gen_end = 1;
  for (int g = 1; g <= depth; ++g) {
    last.clear();
    for (size_t idx = gen_begin; idx < gen_end; ++idx) {
      const Segment2 s = out.segments[idx].seg;  // copy: push_back may reallocate
      const Vec2 d = s.b - s.a;
      std::vector<Scalar> ts{0, 1};
      for (int r = 0; r < map.piece_count(); ++r)
        for (const auto& atom : map.region(r).atoms) boundary_crossings(atom, s.a, d, ts);
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end(),
                           [](Scalar a, Scalar b) { return std::abs(a - b) < 1e-15; }),
               ts.end());
      for (size_t j = 0; j + 1 < ts.size(); ++j) {
        const Vec2 pa = s.a + ts[j] * d;
        const Vec2 pb = s.a + ts[j + 1] * d;
        const int region = region_of(map, Vec2(0.5 * (pa + pb)));
        const Vec2 qa = apply_piece(map, region, pa);
        const Vec2 qb = apply_piece(map, region, pb);
        if (qa.norm() > r_div || qb.norm() > r_div)
          throw std::runtime_error("critical_images: image escaped the divergence radius");
        if ((qb - qa).norm() < min_len) continue;
        out.segments.push_back({{qa, qb}, g, static_cast<int>(idx)});
        last.push_back(qa);
        last.push_back(qb);
      }
    }
    gen_begin = gen_end;
    gen_end = out.segments.size();
    if (g < depth) earlier.insert(earlier.end(), last.begin(), last.end());
  }

  if (depth == 0 || last.empty()) {
    out.hull_stabilized = true;
  } else {
    const Hull hull = convex_hull(earlier);
    Scalar radius = 0;
    for (const Vec2& p : earlier) radius = std::max(radius, p.norm());
    Scalar worst = 0;
    for (const Vec2& p : last) worst = std::max(worst, dist_to_hull(p, hull));
    out.hull_stabilized = worst <= 1e-9 * (1 + radius);
  }
  return out;
}

}  // namespace pwl
