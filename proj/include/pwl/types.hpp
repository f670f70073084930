#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace pwl {

using Scalar = double;

template <int N>
using Vec = Eigen::Matrix<Scalar, N, 1>;
template <int N>
using Mat = Eigen::Matrix<Scalar, N, N>;

using Vec2 = Vec<2>;
using Mat2 = Mat<2>;
using Vec3 = Vec<3>;
using Mat3 = Mat<3>;

// Region index within a map's ordered piece list.
using RegionId = std::uint8_t;

}  // namespace pwl
