#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwl/eigen_kernel.hpp"
#include "pwl/map_model.hpp"

namespace pwl {

enum class OrbitStatus { Bounded, ConvergedToO, Diverged };

inline const char* to_string(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::Bounded: return "BOUNDED";
    case OrbitStatus::ConvergedToO: return "CONVERGED_TO_O";
    case OrbitStatus::Diverged: return "DIVERGED";
  }
  return "?";
}

struct OrbitOptions {
  long n_transient = 10000;   // steps dropped before sampling
  long sample_budget = 100000;
  long thin = 1;              // keep every thin-th post-transient point
  Scalar r_div = 1e8;         // norm beyond which the orbit counts as divergent
  Scalar eps_fix = 1e-10;     // ball around O for the convergence test
};

template <int N>
struct Orbit {
  Vec<N> x0 = Vec<N>::Zero();
  std::vector<Vec<N>> points;       // post-transient samples
  std::vector<RegionId> itinerary;  // region applied at each step taken
  OrbitStatus status = OrbitStatus::Bounded;
  long steps = 0;            // steps actually taken
  long transient_used = 0;   // min(steps, n_transient)
};

namespace detail {
template <int N>
std::vector<Scalar> piece_spectral_radii(const PwlMap<N>& map) {
  std::vector<Scalar> r(map.piece_count());
  for (int i = 0; i < map.piece_count(); ++i) r[i] = spectral_radius<N>(map.piece(i).A);
  return r;
}
}  // namespace detail

// Iterates up to n_max steps. Divergence: some iterate leaves the r_div ball.
// Convergence to O: an iterate enters the eps_fix ball while the governing
// piece is a strict contraction (a nonhyperbolic center never converges).
// Offsets (affine pieces) disable the convergence test.
template <int N>
Orbit<N> iterate(const PwlMap<N>& map, const Vec<N>& x0, long n_max,
                 const OrbitOptions& opts = {}) {
  if (!x0.allFinite()) throw std::invalid_argument("iterate: non-finite initial point");
  if (n_max < 1) throw std::invalid_argument("iterate: n_max must be >= 1");
  if (!(opts.r_div > opts.eps_fix && opts.eps_fix > 0))
    throw std::invalid_argument("iterate: need r_div > eps_fix > 0");

  const std::vector<Scalar> rho = detail::piece_spectral_radii(map);
  bool origin_fixed = true;
  for (int i = 0; i < map.piece_count(); ++i)
    if (map.piece(i).b.squaredNorm() > 0) origin_fixed = false;

  Orbit<N> orbit;
  orbit.x0 = x0;
  orbit.itinerary.reserve(static_cast<size_t>(std::min<long>(n_max, 1 << 20)));
  Vec<N> x = x0;
  const Scalar r_div2 = opts.r_div * opts.r_div;
  const Scalar eps2 = opts.eps_fix * opts.eps_fix;
  long kept = 0;
  for (long k = 0; k < n_max; ++k) {
    const Scalar n2 = x.squaredNorm();
    if (n2 > r_div2) {
      orbit.status = OrbitStatus::Diverged;
      break;
    }
    if (origin_fixed && n2 < eps2 && rho[region_of(map, x)] < 1) {
      orbit.status = OrbitStatus::ConvergedToO;
      break;
    }
    int r = 0;
    x = step(map, x, r);
    orbit.itinerary.push_back(static_cast<RegionId>(r));
    ++orbit.steps;
    if (k >= opts.n_transient && kept < opts.sample_budget &&
        (k - opts.n_transient) % opts.thin == 0) {
      orbit.points.push_back(x);
      ++kept;
    }
  }
  orbit.transient_used = std::min(orbit.steps, opts.n_transient);
  return orbit;
}

// Ordered Jacobian product along the orbit of x0: A_k = J_{j_k} ... J_{j_1},
// so T^k(X) = A_k X for homogeneous maps. k = 0 gives the identity.
template <int N>
Mat<N> itinerary_matrix(const PwlMap<N>& map, const Vec<N>& x0, long k,
                        Scalar r_div = 1e8) {
  Mat<N> a = Mat<N>::Identity();
  Vec<N> x = x0;
  for (long i = 0; i < k; ++i) {
    if (x.norm() > r_div)
      throw std::runtime_error("itinerary_matrix: orbit diverged before step " + std::to_string(k));
    int r = 0;
    x = step(map, x, r);
    a = (map.piece(r).A * a).eval();
  }
  return a;
}

// First step at which the orbit of x0 and of x0 + eps*dir occupy different
// regions; nullopt when no split happens within n_max steps.
template <int N>
std::optional<long> sensitivity_split_time(const PwlMap<N>& map, const Vec<N>& x0, Scalar eps,
                                           long n_max, Scalar r_div = 1e8,
                                           std::optional<Vec<N>> direction = std::nullopt) {
  if (eps < 0) throw std::invalid_argument("sensitivity_split_time: eps must be >= 0");
  if (eps == 0) return std::nullopt;
  Vec<N> dir = direction.value_or(Vec<N>::Unit(0));
  dir.normalize();
  Vec<N> a = x0, b = x0 + eps * dir;
  for (long k = 0; k < n_max; ++k) {
    if (region_of(map, a) != region_of(map, b)) return k;
    if (a.norm() > r_div || b.norm() > r_div)
      throw std::runtime_error("sensitivity_split_time: orbit diverged before a split");
    int r = 0;
    a = step(map, a, r);
    b = step(map, b, r);
  }
  return std::nullopt;
}

}  // namespace pwl
