#include "pwl/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "pwl/eigen_kernel.hpp"

namespace pwl {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Divergent: return "DIVERGENT";
    case Verdict::FixedPoint: return "FIXED_POINT";
    case Verdict::SegmentCircle: return "SEGMENT_CIRCLE";
    case Verdict::Wqa: return "WQA";
    case Verdict::Unresolved: return "UNRESOLVED";
  }
  return "?";
}

namespace {

Scalar cloud_radius2(const std::vector<Vec2>& pts) {
  Scalar r2 = 0;
  for (const auto& p : pts) r2 = std::max(r2, p.squaredNorm());
  return r2;
}

constexpr Scalar kPi = 3.14159265358979323846;

}  // namespace

std::optional<std::vector<Scalar>> line_support_test(const std::vector<Vec2>& points,
                                                     const LineSupportOptions& opts) {
  if (points.empty()) return std::nullopt;
  const Scalar radius = std::sqrt(cloud_radius2(points));
  if (radius == 0) return std::nullopt;

  const int nb = opts.bins;
  std::vector<int> bin_of(points.size());
  std::vector<char> occupied(nb, 0);
  for (size_t i = 0; i < points.size(); ++i) {
    Scalar th = std::atan2(points[i].y(), points[i].x());
    if (th < 0) th += kPi;          // mod pi
    if (th >= kPi) th -= kPi;
    int b = static_cast<int>(th / kPi * nb);
    if (b >= nb) b = nb - 1;
    bin_of[i] = b;
    occupied[b] = 1;
  }

  // contiguous occupied bins form one cluster (with wrap: angle pi ~ angle 0)
  std::vector<int> cluster_of_bin(nb, -1);
  int clusters = 0;
  for (int b = 0; b < nb; ++b) {
    if (!occupied[b]) continue;
    if (b > 0 && occupied[b - 1])
      cluster_of_bin[b] = cluster_of_bin[b - 1];
    else
      cluster_of_bin[b] = clusters++;
  }
  if (occupied[0] && occupied[nb - 1] && cluster_of_bin[0] != cluster_of_bin[nb - 1]) {
    const int first_id = cluster_of_bin[0];
    const int merged = cluster_of_bin[nb - 1];
    for (int b = 0; b < nb && occupied[b] && cluster_of_bin[b] == first_id; ++b)
      cluster_of_bin[b] = merged;
    --clusters;  // id first_id is now unused; accumulators below skip it via used[]
  }
  if (clusters > opts.l_max) return std::nullopt;

  // mean direction per cluster via the doubled-angle circular mean
  const int nc = clusters == 0 ? 0 : 1 + *std::max_element(cluster_of_bin.begin(), cluster_of_bin.end());
  std::vector<Scalar> sx(nc, 0), sy(nc, 0);
  for (size_t i = 0; i < points.size(); ++i) {
    const int c = cluster_of_bin[bin_of[i]];
    const Scalar th = std::atan2(points[i].y(), points[i].x());
    sx[c] += std::cos(2 * th);
    sy[c] += std::sin(2 * th);
  }
  std::vector<Scalar> angles;
  std::vector<char> used(nc, 0);
  for (size_t i = 0; i < points.size(); ++i) used[cluster_of_bin[bin_of[i]]] = 1;
  for (int c = 0; c < nc; ++c) {
    if (!used[c]) continue;
    Scalar phi = 0.5 * std::atan2(sy[c], sx[c]);
    if (phi < 0) phi += kPi;
    angles.push_back(phi);
  }

  // perpendicular scatter of each cluster about its line
  std::vector<Scalar> worst(nc, 0);
  std::vector<Scalar> phis(nc, 0);
  {
    int idx = 0;
    for (int c = 0; c < nc; ++c)
      if (used[c]) phis[c] = angles[idx++];
  }
  for (size_t i = 0; i < points.size(); ++i) {
    const int c = cluster_of_bin[bin_of[i]];
    const Scalar phi = phis[c];
    const Scalar perp = std::abs(-std::sin(phi) * points[i].x() + std::cos(phi) * points[i].y());
    worst[c] = std::max(worst[c], perp);
  }
  for (int c = 0; c < nc; ++c)
    if (used[c] && worst[c] > opts.eps_line * radius) return std::nullopt;

  std::sort(angles.begin(), angles.end());
  return angles;
}

std::optional<std::vector<Vec3>> ray_support_test(const std::vector<Vec3>& points,
                                                  const LineSupportOptions& opts) {
  if (points.empty()) return std::nullopt;
  Scalar radius = 0;
  for (const auto& p : points) radius = std::max(radius, p.norm());
  if (radius == 0) return std::nullopt;

  const Scalar cos_merge = std::cos(kPi / opts.bins);  // same angular granularity as 2D
  struct Cluster {
    Vec3 dir;
    Scalar worst = 0;
  };
  std::vector<Cluster> clusters;
  for (const auto& p : points) {
    const Scalar n = p.norm();
    if (n == 0) continue;
    Vec3 d = p / n;
    // canonicalize the sign: rays through O are unsigned directions
    if (d.x() < 0 || (d.x() == 0 && (d.y() < 0 || (d.y() == 0 && d.z() < 0)))) d = -d;
    bool placed = false;
    for (auto& c : clusters) {
      if (std::abs(c.dir.dot(d)) >= cos_merge) {
        const Scalar perp = (p - c.dir * c.dir.dot(p)).norm();
        c.worst = std::max(c.worst, perp);
        placed = true;
        break;
      }
    }
    if (!placed) {
      if (static_cast<int>(clusters.size()) == opts.l_max) return std::nullopt;
      clusters.push_back({d, 0});
    }
  }
  std::vector<Vec3> dirs;
  for (const auto& c : clusters) {
    if (c.worst > opts.eps_line * radius) return std::nullopt;
    dirs.push_back(c.dir);
  }
  return dirs;
}

namespace {

// Per-angular-bin radial spread, relative to the cloud radius: near zero for
// closed invariant curves and thin rings around a nonhyperbolic center.
bool cloud_is_thin_ring(const std::vector<Vec2>& pts, const ConservativeOptions& opts) {
  const Scalar radius = std::sqrt(cloud_radius2(pts));
  if (radius == 0) return false;
  const int nb = opts.bins;
  std::vector<Scalar> rmin(nb, std::numeric_limits<Scalar>::infinity());
  std::vector<Scalar> rmax(nb, 0);
  for (const auto& p : pts) {
    Scalar th = std::atan2(p.y(), p.x());
    if (th < 0) th += 2 * kPi;
    int b = static_cast<int>(th / (2 * kPi) * nb);
    if (b >= nb) b = nb - 1;
    const Scalar r = p.norm();
    rmin[b] = std::min(rmin[b], r);
    rmax[b] = std::max(rmax[b], r);
  }
  Scalar spread = 0;
  for (int b = 0; b < nb; ++b)
    if (rmax[b] > 0) spread = std::max(spread, rmax[b] - rmin[b]);
  return spread <= opts.max_rel_spread * radius;
}

bool has_center_piece(const PwlMap<2>& map, Scalar det_tol) {
  for (int i = 0; i < map.piece_count(); ++i)
    if (is_linear_center(map.piece(i).A, det_tol)) return true;
  return false;
}

// Runtime guard for the no-hyperbolic-cycle property: an exact near-return
// whose itinerary product is far from eigenvalue 1 would contradict it.
template <int N>
std::optional<std::string> hyperbolic_period_artifact(const PwlMap<N>& map,
                                                      const std::vector<Vec<N>>& pts) {
  const size_t checks[] = {0, pts.size() / 2};
  for (size_t i : checks) {
    if (i >= pts.size()) continue;
    const long k_cap = std::min<long>(64, static_cast<long>(pts.size() - i - 1));
    for (long k = 1; k <= k_cap; ++k) {
      const Scalar scale = std::max<Scalar>(1, pts[i].norm());
      if ((pts[i + k] - pts[i]).norm() < 1e-12 * scale) {
        const Mat<N> a = itinerary_matrix(map, pts[i], k);
        const Scalar p1 = std::abs(char_poly_at_one<N>(a));
        if (p1 > 1e-6)
          return "near-period " + std::to_string(k) + " with |P(1)|=" + std::to_string(p1);
        break;  // nonhyperbolic return: expected on segment/curve attractors
      }
    }
  }
  return std::nullopt;
}

// A cloud that stayed inside r_div for the sampling window may still be the
// long transient of an escaping (or converging) orbit; keep stepping without
// storing before trusting it as an attractor.
template <int N>
OrbitStatus extended_terminal(const PwlMap<N>& map, const Vec<N>& last,
                              const ClassifyOptions& opts, long* extra) {
  *extra = 0;
  if (opts.divergence_horizon < 1) return OrbitStatus::Bounded;
  OrbitOptions o = opts.orbit;
  o.n_transient = opts.divergence_horizon;
  o.sample_budget = 0;
  const Orbit<N> tail = iterate(map, last, opts.divergence_horizon, o);
  *extra = tail.steps;
  return tail.status;
}

// Extract the densest support ray as (slope, abscissa segment): points are
// assigned to their nearest line, the best-populated line is parameterized by
// x, and the half-line holding more points wins.
struct DominantSegment {
  Scalar m = 0;
  std::pair<Scalar, Scalar> seg{0, 0};
  bool ok = false;
  std::string why;
};

DominantSegment dominant_segment(const std::vector<Vec2>& pts, const std::vector<Scalar>& angles) {
  DominantSegment d;
  if (angles.empty()) {
    d.why = "no candidate direction";
    return d;
  }
  std::vector<long> count(angles.size(), 0);
  std::vector<size_t> owner(pts.size(), 0);
  for (size_t i = 0; i < pts.size(); ++i) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (size_t j = 0; j < angles.size(); ++j) {
      const Scalar perp =
          std::abs(-std::sin(angles[j]) * pts[i].x() + std::cos(angles[j]) * pts[i].y());
      if (perp < best) {
        best = perp;
        owner[i] = j;
      }
    }
    ++count[owner[i]];
  }
  const size_t j = std::max_element(count.begin(), count.end()) - count.begin();
  const Scalar phi = angles[j];
  if (std::abs(std::cos(phi)) < 1e-8) {
    d.why = "vertical support line";
    return d;
  }
  d.m = std::tan(phi);
  const Scalar inv = 1 / (1 + d.m * d.m);
  long pos = 0, neg = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (owner[i] != j) continue;
    const Scalar x = (pts[i].x() + d.m * pts[i].y()) * inv;
    (x > 0 ? pos : neg)++;
  }
  const int side = pos >= neg ? 1 : -1;
  Scalar lo = std::numeric_limits<Scalar>::infinity(), hi = -lo;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (owner[i] != j) continue;
    const Scalar x = (pts[i].x() + d.m * pts[i].y()) * inv;
    if (side * x <= 0) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!(lo < hi)) {
    d.why = "degenerate support segment";
    return d;
  }
  d.seg = {lo, hi};
  d.ok = true;
  return d;
}

void attach_diagnostics(const PwlMap<2>& map, const Vec2& x0, const ClassifyOptions& opts,
                        Classification& c) {
  if (!opts.diagnostics) return;
  try {
    c.lyapunov = lyapunov_max(map, x0, opts.lyap_steps, opts.transient, opts.orbit.r_div);
  } catch (const std::exception&) {
  }
  try {
    c.split_time = sensitivity_split_time(map, x0, opts.sens_eps, opts.sens_cap, opts.orbit.r_div);
  } catch (const std::exception&) {
  }
}

}  // namespace

Classification classify_attractor(const PwlMap<1>& map, const Vec<1>& x0,
                                  const ClassifyOptions& opts) {
  Classification c;
  const SampleResult<1> s = omega_limit_sample(map, x0, opts);
  c.orbit_status = s.status;
  c.steps = s.steps;
  if (s.status == OrbitStatus::Diverged) {
    c.verdict = Verdict::Divergent;
    return c;
  }
  if (s.status == OrbitStatus::ConvergedToO) {
    c.verdict = Verdict::FixedPoint;
    return c;
  }
  if (!s.sample->points.empty()) {
    long extra = 0;
    const OrbitStatus ext = extended_terminal(map, s.sample->points.back(), opts, &extra);
    c.steps += extra;
    if (ext != OrbitStatus::Bounded) {
      c.orbit_status = ext;
      c.verdict = ext == OrbitStatus::Diverged ? Verdict::Divergent : Verdict::FixedPoint;
      c.note = "terminal status reached after the sampling window";
      return c;
    }
  }
  const CircleMap1D f = to_circle_map(map);
  const CmVerdict v = cm_classify(f);
  c.cm_verdict = v;
  switch (v.kind) {
    case CmVerdict::Kind::PeriodicFilled:
    case CmVerdict::Kind::Quasiperiodic:
      c.verdict = Verdict::SegmentCircle;
      try {
        c.rotation = rotation_number(f);
      } catch (const std::exception&) {
      }
      break;
    case CmVerdict::Kind::FixedPointO:
      c.verdict = Verdict::FixedPoint;
      break;
    case CmVerdict::Kind::Divergent:
      c.verdict = Verdict::Unresolved;
      c.note = "bounded orbit but divergent slope configuration";
      break;
  }
  return c;
}

Classification classify_attractor(const PwlMap<2>& map, const Vec2& x0,
                                  const ClassifyOptions& opts) {
  Classification c;
  const SampleResult<2> s = omega_limit_sample(map, x0, opts);
  c.orbit_status = s.status;
  c.steps = s.steps;
  if (s.status == OrbitStatus::Diverged) {
    c.verdict = Verdict::Divergent;
    return c;
  }
  if (s.status == OrbitStatus::ConvergedToO) {
    c.verdict = Verdict::FixedPoint;
    return c;
  }
  const std::vector<Vec2>& cloud = s.sample->points;
  if (cloud.empty()) {
    c.verdict = Verdict::Unresolved;
    c.note = "no post-transient samples";
    return c;
  }
  {
    long extra = 0;
    const OrbitStatus ext = extended_terminal(map, cloud.back(), opts, &extra);
    c.steps += extra;
    if (ext != OrbitStatus::Bounded) {
      c.orbit_status = ext;
      c.verdict = ext == OrbitStatus::Diverged ? Verdict::Divergent : Verdict::FixedPoint;
      c.note = "terminal status reached after the sampling window";
      return c;
    }
  }

  if (auto artifact = hyperbolic_period_artifact(map, cloud)) {
    c.verdict = Verdict::Unresolved;
    c.note = "hyperbolic-periodicity artifact: " + *artifact;
    return c;
  }

  if (has_center_piece(map, opts.conservative.det_tol) &&
      cloud_is_thin_ring(cloud, opts.conservative)) {
    c.verdict = Verdict::Unresolved;
    c.note = "conservative-region candidate";
    attach_diagnostics(map, x0, opts, c);
    return c;
  }

  const auto lines = line_support_test(cloud, opts.line);
  if (lines) {
    c.support_angles = *lines;
    if (!opts.attempt_return_map) {
      c.verdict = Verdict::SegmentCircle;
      c.note = "line support only; return map not attempted";
      return c;
    }
    const DominantSegment dom = dominant_segment(cloud, *lines);
    if (!dom.ok) {
      c.verdict = Verdict::Unresolved;
      c.note = "line support but no usable ray segment: " + dom.why;
      attach_diagnostics(map, x0, opts, c);
      return c;
    }
    try {
      BuildResult br = build_return_map(map, dom.m, dom.seg, opts.rm);
      if (br.ok()) {
        const CmVerdict v = cm_classify(br.map->cm);
        c.cm_verdict = v;
        try {
          c.rotation = rotation_number(br.map->cm);
        } catch (const std::exception&) {
        }
        c.return_map = std::move(*br.map);
        if (v.kind == CmVerdict::Kind::PeriodicFilled ||
            v.kind == CmVerdict::Kind::Quasiperiodic) {
          c.verdict = Verdict::SegmentCircle;
        } else {
          c.verdict = Verdict::Unresolved;
          c.note = std::string("return map classified ") + to_string(v.kind) +
                   " against a bounded sampled cloud";
        }
      } else {
        c.verdict = Verdict::Unresolved;
        c.return_failure = to_string(br.failure);
        c.note = "line support but return map failed: " + br.detail;
      }
    } catch (const std::exception& e) {
      c.verdict = Verdict::Unresolved;
      c.note = std::string("line support but return map threw: ") + e.what();
    }
    attach_diagnostics(map, x0, opts, c);
    return c;
  }

  // No line support: bounded, non-converged, irreducible. Attempt a reduced
  // return map anyway so the WQA verdict carries its failure as evidence.
  if (!opts.attempt_return_map) {
    c.verdict = Verdict::Wqa;
    c.note = "color-only cascade; return map not attempted";
    return c;
  }
  {
    // evidence probe target: ray through the densest coarse angular bin
    constexpr int kCoarseBins = 256;
    std::vector<long> hist(kCoarseBins, 0);
    for (const auto& p : cloud) {
      Scalar th = std::atan2(p.y(), p.x());
      if (th < 0) th += kPi;
      if (th >= kPi) th -= kPi;
      int b = static_cast<int>(th / kPi * kCoarseBins);
      if (b >= kCoarseBins) b = kCoarseBins - 1;
      ++hist[b];
    }
    const int bmax = static_cast<int>(std::max_element(hist.begin(), hist.end()) - hist.begin());
    const Scalar phi = (bmax + 0.5) * kPi / kCoarseBins;
    const DominantSegment dom = dominant_segment(cloud, {phi});
    ReturnMapOptions ev = opts.rm;
    ev.probes = opts.evidence_probes;
    std::string failure = "degenerate-segment", detail = dom.why;
    bool built_ok = false;
    if (dom.ok) {
      try {
        BuildResult br = build_return_map(map, dom.m, dom.seg, ev);
        if (br.ok()) {
          built_ok = true;
        } else {
          failure = to_string(br.failure);
          detail = br.detail;
        }
      } catch (const std::exception& e) {
        failure = "probe-divergence";
        detail = e.what();
      }
    }
    if (built_ok) {
      c.verdict = Verdict::Unresolved;
      c.note = "no line support yet a return map succeeded on the densest ray";
    } else {
      c.verdict = Verdict::Wqa;
      c.return_failure = failure;
      c.note = "return map attempt: " + detail;
    }
  }
  attach_diagnostics(map, x0, opts, c);
  return c;
}

Classification classify_attractor(const PwlMap<3>& map, const Vec3& x0,
                                  const ClassifyOptions& opts) {
  Classification c;
  const SampleResult<3> s = omega_limit_sample(map, x0, opts);
  c.orbit_status = s.status;
  c.steps = s.steps;
  if (s.status == OrbitStatus::Diverged) {
    c.verdict = Verdict::Divergent;
    return c;
  }
  if (s.status == OrbitStatus::ConvergedToO) {
    c.verdict = Verdict::FixedPoint;
    return c;
  }
  const std::vector<Vec3>& cloud = s.sample->points;
  if (cloud.empty()) {
    c.verdict = Verdict::Unresolved;
    c.note = "no post-transient samples";
    return c;
  }
  {
    long extra = 0;
    const OrbitStatus ext = extended_terminal(map, cloud.back(), opts, &extra);
    c.steps += extra;
    if (ext != OrbitStatus::Bounded) {
      c.orbit_status = ext;
      c.verdict = ext == OrbitStatus::Diverged ? Verdict::Divergent : Verdict::FixedPoint;
      c.note = "terminal status reached after the sampling window";
      return c;
    }
  }
  if (auto artifact = hyperbolic_period_artifact(map, cloud)) {
    c.verdict = Verdict::Unresolved;
    c.note = "hyperbolic-periodicity artifact: " + *artifact;
    return c;
  }
  const auto rays = ray_support_test(cloud, opts.line);
  if (rays) {
    c.verdict = Verdict::Unresolved;
    c.note = "ray-supported cloud; 1D reduction not available in 3D";
    return c;
  }
  c.verdict = Verdict::Wqa;
  c.return_failure = "unsupported-dimension";
  c.note = "no ray support; return-map reduction is defined for 2D only";
  return c;
}

Classification classify_attractor(const MapAny& map, const std::vector<Scalar>& ic,
                                  const ClassifyOptions& opts) {
  return std::visit(
      [&](const auto& m) {
        constexpr int N = std::decay_t<decltype(m)>::dim;
        if (static_cast<int>(ic.size()) != N)
          throw std::invalid_argument("classify_attractor: initial condition has wrong dimension");
        Vec<N> x0;
        for (int i = 0; i < N; ++i) x0[i] = ic[i];
        return classify_attractor(m, x0, opts);
      },
      map);
}

}  // namespace pwl
