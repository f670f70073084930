#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pwl/circle_map.hpp"
#include "pwl/map_model.hpp"

namespace pwl {

// First-return map of a 2D homogeneous map on a segment of the ray y = m x:
// the 1D map of return abscissae, one linear branch per maximal sub-interval
// sharing an itinerary. Each branch slope is an eigenvalue of its itinerary
// product with eigenvector (1, m).
struct ReturnMap1D {
  Scalar m = 0;                // ray slope
  CircleMap1D cm;              // slopes, breakpoints, return times, itineraries, domain
  std::vector<Mat2> matrices;  // per-branch itinerary product A_k
};

struct ReturnMapOptions {
  long k_max = 10000;        // return steps before giving up (the no-reduction signature)
  int b_max = 64;            // branch cap
  int probes = 2048;         // abscissa grid size
  Scalar bisect_tol = 1e-12;
  Scalar angular_tol = 1e-10;  // |sin(angle to ray)| accepted as "on the ray"
  Scalar r_div = 1e8;
};

struct BuildResult {
  enum class Failure { None, ReturnTime, BranchCount };
  std::optional<ReturnMap1D> map;
  Failure failure = Failure::None;
  std::string detail;  // human-readable failure context

  bool ok() const { return failure == Failure::None && map.has_value(); }
};

const char* to_string(BuildResult::Failure f);

// Probes a grid of abscissae in seg (which must exclude 0), iterating each
// until the orbit re-crosses the ray's half-line within angular_tol. Probes
// sharing (return time, itinerary) merge into branches; breakpoints are
// refined by bisection. Exceeding k_max or b_max is reported as FAILURE, the
// operational signature of "no 1D reduction". Probe divergence throws.
BuildResult build_return_map(const PwlMap<2>& map, Scalar m, std::pair<Scalar, Scalar> seg,
                             const ReturnMapOptions& opts = {});

// max over branches of ||A_k (1,m)^T - lambda (1,m)^T||.
Scalar verify_branch_eigen(const ReturnMap1D& rm);

// Expected two-branch geometry: a segment on x > 0 pairs an expanding first
// branch with a contracting second; a segment on x < 0 mirrors that. A branch
// slope equal to 1 (nonhyperbolic identity) is flagged separately.
struct SideReport {
  bool left_side = false;
  bool conforms = false;
  bool identity_branch = false;
};

SideReport return_geometry_check(const ReturnMap1D& rm, Scalar identity_tol = 1e-9);

}  // namespace pwl
