#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>

#include "pwl/types.hpp"

namespace pwl {

// Spectral data of a 2x2 real matrix, in closed form. Slopes describe
// eigenvector lines y = m x through the origin; a vertical eigenvector or a
// complex pair has no slope.
struct Eigen2 {
  std::array<std::complex<Scalar>, 2> values;   // real: ascending; complex: conjugates, +Im first
  std::array<std::optional<Scalar>, 2> slopes;
  Scalar trace = 0;
  Scalar det = 0;
  bool is_real = false;
  bool is_defective = false;  // repeated eigenvalue with a single eigenvector line
};

namespace detail {
inline std::optional<Scalar> eigvec_slope(const Mat2& a, Scalar lambda) {
  if (a(0, 1) != 0) return (lambda - a(0, 0)) / a(0, 1);
  if (lambda != a(1, 1)) return a(1, 0) / (lambda - a(1, 1));
  return std::nullopt;  // vertical eigenvector (0,1)
}
}  // namespace detail

inline Eigen2 eigen_2x2(const Mat2& a) {
  Eigen2 e;
  e.trace = a(0, 0) + a(1, 1);
  e.det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Scalar disc = e.trace * e.trace - 4 * e.det;
  if (disc >= 0) {
    const Scalar root = std::sqrt(disc);
    const Scalar lo = (e.trace - root) / 2, hi = (e.trace + root) / 2;
    e.values = {std::complex<Scalar>(lo, 0), std::complex<Scalar>(hi, 0)};
    e.is_real = true;
    e.slopes = {detail::eigvec_slope(a, lo), detail::eigvec_slope(a, hi)};
    if (disc == 0) {
      // repeated eigenvalue: defective unless the matrix is a scalar multiple of I
      e.is_defective = !(a(0, 1) == 0 && a(1, 0) == 0);
      if (!e.is_defective) e.slopes = {std::nullopt, std::nullopt};  // every direction
    }
  } else {
    const Scalar im = std::sqrt(-disc) / 2;
    e.values = {std::complex<Scalar>(e.trace / 2, im), std::complex<Scalar>(e.trace / 2, -im)};
  }
  return e;
}

// det(I - A): zero iff 1 is an eigenvalue of A, the nonhyperbolicity
// condition for the cycle whose itinerary product is A.
template <int N>
Scalar char_poly_at_one(const Mat<N>& a) {
  return (Mat<N>::Identity() - a).determinant();
}

template <int N>
Scalar spectral_radius(const Mat<N>& a) {
  if constexpr (N == 1) return std::abs(a(0, 0));
  if constexpr (N == 2) {
    const Eigen2 e = eigen_2x2(a);
    return std::max(std::abs(e.values[0]), std::abs(e.values[1]));
  }
  return a.eigenvalues().cwiseAbs().maxCoeff();
}

// True when the piece preserves area and rotates (complex eigenvalues on the
// unit circle up to tol): orbits of this piece alone lie on invariant ellipses.
inline bool is_linear_center(const Mat2& a, Scalar det_tol = 1e-9) {
  const Scalar tr = a(0, 0) + a(1, 1);
  const Scalar det = a.determinant();
  return std::abs(det - 1) <= det_tol && tr * tr < 4 * det;
}

}  // namespace pwl
