#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwl/map_model.hpp"

namespace pwl {

// 1D PWL homogeneous map: finitely many branches x' = s_i x separated by
// breakpoints. A point equal to a breakpoint takes the branch to its right,
// matching the region convention of the 2D maps. Two branches with one
// breakpoint h form the canonical circle-map shape.
struct CircleMap1D {
  std::vector<Scalar> slopes;                        // one per branch, left to right
  std::vector<Scalar> breakpoints;                   // ascending, size = slopes-1
  std::vector<long> return_times;                    // per branch; empty unless built as a return map
  std::vector<std::string> sequences;                // per-branch itineraries; may be empty
  std::optional<std::pair<Scalar, Scalar>> domain;   // segment the map acts on, if restricted

  bool two_branch() const { return slopes.size() == 2; }
  Scalar sL() const { return slopes.front(); }
  Scalar sR() const { return slopes.back(); }
  Scalar h() const { return breakpoints.front(); }
};

int cm_branch(const CircleMap1D& f, Scalar x);
Scalar cm_eval(const CircleMap1D& f, Scalar x);

CircleMap1D to_circle_map(const PwlMap<1>& map);

// Two-branch orientation-preserving circle homeomorphism condition:
// h > 0 needs sL > 1 > sR > 0, h < 0 the mirrored ordering.
bool cm_is_homeomorphism(const CircleMap1D& f);

// Absorbing interval [sR h, sL h] (endpoints sorted). Throws when O attracts
// or the homeomorphism condition fails and no domain is recorded.
std::pair<Scalar, Scalar> invariant_interval(const CircleMap1D& f);

// Smallest (p, q) by p + q with |p ln sL + q ln sR| <= tol * (p + q), if any:
// then sL^p sR^q = 1 up to floating precision and every orbit has period p + q.
std::optional<std::pair<long, long>> rationality_test(Scalar sL, Scalar sR, long max_pq = 200,
                                                      Scalar tol = 1e-9);

struct RotationResult {
  Scalar rho = 0;                                      // frequency of the leftmost branch
  std::optional<std::pair<long, long>> certificate;    // (p, q) when rational
  enum class Method { ClosedForm, OrbitFrequency } method = Method::ClosedForm;
  Scalar rho_orbit = 0;                                // frequency estimate used as cross-check
};

struct RotationOptions {
  long orbit_steps = 200000;
  long max_pq = 200;
  Scalar rational_tol = 1e-9;
};

// rho = ln sR / (ln sR - ln sL): the log-drift balance gives the asymptotic
// fraction of steps spent in the left branch. With a certificate (p, q) the
// exact value p/(p+q) is reported instead. Multi-branch maps fall back to the
// orbit-frequency estimate of the leftmost branch.
RotationResult rotation_number(const CircleMap1D& f, const RotationOptions& opts = {});

struct CmVerdict {
  enum class Kind { PeriodicFilled, Quasiperiodic, FixedPointO, Divergent } kind;
  long period = 0;  // PeriodicFilled only
  Scalar rho = 0;
  std::optional<std::pair<long, long>> certificate;
};

const char* to_string(CmVerdict::Kind k);

struct CmClassifyOptions {
  RotationOptions rotation;
  Scalar r_div = 1e8;
  Scalar eps_fix = 1e-10;
  long orbit_steps = 100000;   // multi-branch orbit probe
  Scalar period_tol = 1e-10;   // relative exact-return tolerance, multi-branch
};

CmVerdict cm_classify(const CircleMap1D& f, const CmClassifyOptions& opts = {});

// Orbit average of ln|slope|; zero for circle-map dynamics by the drift balance.
Scalar cm_lyapunov(const CircleMap1D& f, Scalar x0, long n);

}  // namespace pwl
