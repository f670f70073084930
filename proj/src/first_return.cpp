#include "pwl/first_return.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwl {
namespace {

struct Probe {
  Scalar x_in = 0;
  Scalar x_out = 0;
  long k = 0;
  std::string sigma;
  bool ok = false;
};

// Iterate (x, m x) until the orbit lies on the ray's half-line again
// (perpendicular residual <= angular_tol * |X|, same sign of x). The return
// abscissa is the projection onto the ray, removing the residual.
Probe run_probe(const PwlMap<2>& map, Scalar m, Scalar x, const ReturnMapOptions& opts) {
  Probe p;
  p.x_in = x;
  const Scalar inv_len = 1 / std::sqrt(1 + m * m);
  const Scalar ux = inv_len, uy = m * inv_len;  // unit ray direction
  const int sign = x > 0 ? 1 : -1;
  Vec2 X{x, m * x};
  for (long k = 1; k <= opts.k_max; ++k) {
    int r = 0;
    X = step(map, X, r);
    p.sigma += map.label(r);
    if (X.norm() > opts.r_div)
      throw std::runtime_error("build_return_map: probe orbit diverged");
    const Scalar cross = ux * X.y() - uy * X.x();
    const Scalar along = ux * X.x() + uy * X.y();
    if (std::abs(cross) <= opts.angular_tol * X.norm() && sign * along > 0) {
      p.k = k;
      p.x_out = along * ux;  // x-coordinate of the projection onto the ray
      p.ok = true;
      return p;
    }
  }
  return p;  // ok = false: no return within k_max
}

bool same_branch(const Probe& a, const Probe& b) { return a.k == b.k && a.sigma == b.sigma; }

}  // namespace

const char* to_string(BuildResult::Failure f) {
  switch (f) {
    case BuildResult::Failure::None: return "none";
    case BuildResult::Failure::ReturnTime: return "return-time";
    case BuildResult::Failure::BranchCount: return "branch-count";
  }
  return "?";
}

BuildResult build_return_map(const PwlMap<2>& map, Scalar m, std::pair<Scalar, Scalar> seg,
                             const ReturnMapOptions& opts) {
  auto [lo, hi] = seg;
  if (lo > hi) std::swap(lo, hi);
  if (lo <= 0 && hi >= 0)
    throw std::invalid_argument("build_return_map: segment must exclude 0");
  if (opts.probes < 2) throw std::invalid_argument("build_return_map: need at least 2 probes");

  BuildResult out;
  std::vector<Probe> probes;
  probes.reserve(opts.probes);
  for (int i = 0; i < opts.probes; ++i) {
    const Scalar x = lo + (hi - lo) * static_cast<Scalar>(i) / static_cast<Scalar>(opts.probes - 1);
    Probe p = run_probe(map, m, x, opts);
    if (!p.ok) {
      out.failure = BuildResult::Failure::ReturnTime;
      out.detail = "no return within k_max at abscissa " + std::to_string(x);
      return out;
    }
    if (!probes.empty() && !same_branch(probes.back(), p)) {
      // quick branch-count guard while probing
      long distinct = 1;
      for (size_t j = 1; j < probes.size(); ++j)
        if (!same_branch(probes[j - 1], probes[j])) ++distinct;
      if (distinct + 1 > opts.b_max) {
        out.failure = BuildResult::Failure::BranchCount;
        out.detail = "more than " + std::to_string(opts.b_max) + " branches";
        return out;
      }
    }
    probes.push_back(std::move(p));
  }

  // group contiguous probes into branches
  std::vector<std::pair<size_t, size_t>> groups;  // [first, last] probe index
  size_t start = 0;
  for (size_t i = 1; i <= probes.size(); ++i) {
    if (i == probes.size() || !same_branch(probes[i - 1], probes[i])) {
      groups.emplace_back(start, i - 1);
      start = i;
    }
  }
  if (static_cast<int>(groups.size()) > opts.b_max) {
    out.failure = BuildResult::Failure::BranchCount;
    out.detail = std::to_string(groups.size()) + " branches exceed b_max";
    return out;
  }

  ReturnMap1D rm;
  rm.m = m;
  rm.cm.domain = std::make_pair(lo, hi);
  for (size_t g = 0; g < groups.size(); ++g) {
    const auto [first, last] = groups[g];
    // breakpoint between this branch and the next, refined by bisection
    if (g + 1 < groups.size()) {
      Scalar a = probes[last].x_in, b = probes[last + 1].x_in;
      const Probe& left = probes[last];
      while (std::abs(b - a) > opts.bisect_tol) {
        const Scalar mid = 0.5 * (a + b);
        const Probe pm = run_probe(map, m, mid, opts);
        if (pm.ok && same_branch(pm, left))
          a = mid;
        else
          b = mid;
      }
      rm.cm.breakpoints.push_back(0.5 * (a + b));
    }
    const Probe& rep = probes[(first + last) / 2];
    rm.cm.slopes.push_back(rep.x_out / rep.x_in);
    rm.cm.return_times.push_back(rep.k);
    rm.cm.sequences.push_back(rep.sigma);
    Mat2 a_k = Mat2::Identity();
    {
      Vec2 X{rep.x_in, m * rep.x_in};
      for (long s = 0; s < rep.k; ++s) {
        int r = 0;
        X = step(map, X, r);
        a_k = (map.piece(r).A * a_k).eval();
      }
    }
    rm.matrices.push_back(a_k);
  }
  out.map = std::move(rm);
  return out;
}

Scalar verify_branch_eigen(const ReturnMap1D& rm) {
  const Vec2 v{1, rm.m};
  Scalar worst = 0;
  for (size_t i = 0; i < rm.matrices.size(); ++i) {
    const Vec2 res = rm.matrices[i] * v - rm.cm.slopes[i] * v;
    worst = std::max(worst, res.norm());
  }
  return worst;
}

SideReport return_geometry_check(const ReturnMap1D& rm, Scalar identity_tol) {
  if (rm.cm.slopes.size() != 2)
    throw std::invalid_argument("return_geometry_check: expects a two-branch return map");
  SideReport r;
  const auto [lo, hi] = *rm.cm.domain;
  r.left_side = hi < 0;
  const Scalar s0 = rm.cm.slopes[0], s1 = rm.cm.slopes[1];
  r.identity_branch = std::abs(s0 - 1) <= identity_tol || std::abs(s1 - 1) <= identity_tol;
  r.conforms = r.left_side ? (s0 < 1 && s1 > 1) : (s0 > 1 && s1 < 1);
  if (r.identity_branch) r.conforms = false;
  return r;
}

}  // namespace pwl
