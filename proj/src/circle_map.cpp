#include "pwl/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pwl {

int cm_branch(const CircleMap1D& f, Scalar x) {
  const auto it = std::upper_bound(f.breakpoints.begin(), f.breakpoints.end(), x);
  return static_cast<int>(it - f.breakpoints.begin());
}

Scalar cm_eval(const CircleMap1D& f, Scalar x) { return f.slopes[cm_branch(f, x)] * x; }

CircleMap1D to_circle_map(const PwlMap<1>& map) {
  CircleMap1D f;
  for (int i = 0; i < map.piece_count(); ++i) f.slopes.push_back(map.piece(i).A(0, 0));
  for (int i = 0; i + 1 < map.piece_count(); ++i) {
    const auto& atoms = map.region(i).atoms;
    const auto* hs = atoms.empty() ? nullptr : std::get_if<HalfSpace<1>>(&atoms.front());
    if (!hs) throw std::invalid_argument("to_circle_map: region without a breakpoint");
    f.breakpoints.push_back(hs->offset / hs->normal(0));
  }
  return f;
}

bool cm_is_homeomorphism(const CircleMap1D& f) {
  if (!f.two_branch()) return false;
  const Scalar sL = f.sL(), sR = f.sR(), h = f.h();
  if (h > 0) return sL > 1 && sR > 0 && sR < 1;
  if (h < 0) return sR > 1 && sL > 0 && sL < 1;
  return false;
}

std::pair<Scalar, Scalar> invariant_interval(const CircleMap1D& f) {
  if (f.two_branch()) {
    if (std::abs(f.sL()) < 1 && std::abs(f.sR()) < 1)
      throw std::domain_error("invariant_interval: O attracts, no invariant interval off the origin");
    if (cm_is_homeomorphism(f)) {
      const Scalar a = f.sR() * f.h(), b = f.sL() * f.h();
      return {std::min(a, b), std::max(a, b)};
    }
  }
  if (f.domain) return *f.domain;
  throw std::domain_error("invariant_interval: not a circle homeomorphism");
}

std::optional<std::pair<long, long>> rationality_test(Scalar sL, Scalar sR, long max_pq,
                                                      Scalar tol) {
  if (!(sL > 0 && sR > 0)) throw std::domain_error("rationality_test: slopes must be positive");
  if (max_pq < 1) throw std::invalid_argument("rationality_test: max_pq must be >= 1");
  const Scalar lL = std::log(sL), lR = std::log(sR);
  for (long n = 2; n <= max_pq; ++n) {
    for (long p = 1; p < n; ++p) {
      const long q = n - p;
      if (std::abs(p * lL + q * lR) <= tol * static_cast<Scalar>(n)) return std::make_pair(p, q);
    }
  }
  return std::nullopt;
}

namespace {

// Frequency of the leftmost branch along an orbit; x0 inside the interval of
// interest. Breaks off on escape past r_div.
Scalar leftmost_branch_frequency(const CircleMap1D& f, Scalar x0, long steps, Scalar r_div = 1e8) {
  Scalar x = x0;
  long hits = 0, taken = 0;
  for (long k = 0; k < steps; ++k) {
    if (!(std::abs(x) < r_div)) break;
    const int b = cm_branch(f, x);
    if (b == 0) ++hits;
    x = f.slopes[b] * x;
    ++taken;
  }
  return taken ? static_cast<Scalar>(hits) / static_cast<Scalar>(taken) : 0;
}

Scalar domain_midpoint(const CircleMap1D& f) {
  const auto [lo, hi] = invariant_interval(f);
  return 0.5 * (lo + hi);
}

}  // namespace

RotationResult rotation_number(const CircleMap1D& f, const RotationOptions& opts) {
  RotationResult r;
  if (f.two_branch() && cm_is_homeomorphism(f)) {
    const Scalar sL = f.sL(), sR = f.sR();
    r.certificate = rationality_test(sL, sR, opts.max_pq, opts.rational_tol);
    r.rho = r.certificate ? static_cast<Scalar>(r.certificate->first) /
                                static_cast<Scalar>(r.certificate->first + r.certificate->second)
                          : std::log(sR) / (std::log(sR) - std::log(sL));
    r.method = RotationResult::Method::ClosedForm;
    r.rho_orbit = leftmost_branch_frequency(f, domain_midpoint(f), opts.orbit_steps);
    return r;
  }
  if (!f.domain)
    throw std::domain_error("rotation_number: not a circle homeomorphism and no domain recorded");
  r.method = RotationResult::Method::OrbitFrequency;
  r.rho = r.rho_orbit = leftmost_branch_frequency(f, domain_midpoint(f), opts.orbit_steps);
  return r;
}

const char* to_string(CmVerdict::Kind k) {
  switch (k) {
    case CmVerdict::Kind::PeriodicFilled: return "PERIODIC_FILLED";
    case CmVerdict::Kind::Quasiperiodic: return "QUASIPERIODIC";
    case CmVerdict::Kind::FixedPointO: return "FIXED_POINT_O";
    case CmVerdict::Kind::Divergent: return "DIVERGENT";
  }
  return "?";
}

CmVerdict cm_classify(const CircleMap1D& f, const CmClassifyOptions& opts) {
  CmVerdict v{CmVerdict::Kind::Divergent, 0, 0, std::nullopt};
  const bool all_contracting =
      std::all_of(f.slopes.begin(), f.slopes.end(), [](Scalar s) { return std::abs(s) < 1; });
  if (all_contracting) {
    v.kind = CmVerdict::Kind::FixedPointO;
    return v;
  }
  if (f.two_branch() && cm_is_homeomorphism(f)) {
    const RotationResult r = rotation_number(f, opts.rotation);
    v.rho = r.rho;
    v.certificate = r.certificate;
    if (r.certificate) {
      v.kind = CmVerdict::Kind::PeriodicFilled;
      v.period = r.certificate->first + r.certificate->second;
    } else {
      v.kind = CmVerdict::Kind::Quasiperiodic;
    }
    return v;
  }
  if (!f.domain) return v;  // no structural route and nowhere to probe: treat as divergent

  // Multi-branch (or non-canonical) case: probe an orbit inside the domain.
  Scalar x = domain_midpoint(f);
  const long transient = std::max<long>(1000, opts.orbit_steps / 10);
  long hits = 0, taken = 0;
  Scalar x_ref = 0;
  long period = 0;
  for (long k = 0; k < opts.orbit_steps; ++k) {
    if (!(std::abs(x) < opts.r_div)) return v;  // Divergent
    if (std::abs(x) < opts.eps_fix) {
      v.kind = CmVerdict::Kind::FixedPointO;
      return v;
    }
    const int b = cm_branch(f, x);
    if (b == 0) ++hits;
    x = f.slopes[b] * x;
    ++taken;
    if (k + 1 == transient) x_ref = x;
    if (k + 1 > transient && period == 0 && k + 1 - transient <= opts.rotation.max_pq &&
        std::abs(x - x_ref) <= opts.period_tol * std::abs(x_ref)) {
      period = k + 1 - transient;
    }
  }
  v.rho = taken ? static_cast<Scalar>(hits) / static_cast<Scalar>(taken) : 0;
  if (period > 0) {
    v.kind = CmVerdict::Kind::PeriodicFilled;
    v.period = period;
  } else {
    v.kind = CmVerdict::Kind::Quasiperiodic;
  }
  return v;
}

Scalar cm_lyapunov(const CircleMap1D& f, Scalar x0, long n) {
  if (n < 1) throw std::invalid_argument("cm_lyapunov: n must be >= 1");
  Scalar x = x0, acc = 0;
  for (long k = 0; k < n; ++k) {
    const int b = cm_branch(f, x);
    const Scalar s = std::abs(f.slopes[b]);
    if (s == 0) return -std::numeric_limits<Scalar>::infinity();
    acc += std::log(s);
    x = f.slopes[b] * x;
  }
  return acc / static_cast<Scalar>(n);
}

}  // namespace pwl
