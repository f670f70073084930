#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pwl/classifier.hpp"

namespace pwl {

// Raster cell codes and the fixed palette shared by parameter scans and
// basin rasters.
enum class CellCode : std::uint8_t { Gray, Green, Red, White };

std::array<std::uint8_t, 3> rgb_for(CellCode c);
CellCode code_for(Verdict v);

struct ScanAxis {
  std::string param;
  Scalar lo = 0, hi = 0;
  int n = 0;
};

// value(i) = lo + i*(hi-lo)/(n-1): endpoints inclusive, so refining a grid
// from n to 2n-1 revisits the same coordinates.
Scalar axis_value(const ScanAxis& ax, int i);

struct ScanGrid {
  int width = 0, height = 0;
  std::vector<CellCode> codes;  // row-major; row 0 carries the highest axis2 value
  std::string provenance;       // key = value lines: family, thresholds, seed
};

// Per-cell pure classification over a parameter rectangle; the grid bytes do
// not depend on the worker count (static row-block partitioning). Every IC in
// `ics` is classified per cell and the codes merged with priority
// RED > GREEN > WHITE > GRAY, so coexisting attractors are not hidden by an
// IC that happens to land in the basin of O.
ScanGrid scan_2d_params(const std::string& id,
                        const std::vector<std::pair<std::string, std::string>>& base,
                        const ScanAxis& ax1, const ScanAxis& ax2,
                        const std::vector<std::vector<Scalar>>& ics,
                        const ClassifyOptions& opts, int threads);

struct Bif1D {
  std::vector<std::pair<Scalar, Scalar>> rows;  // (parameter, projected coordinate)
  std::string provenance;
};

// Post-transient projections per parameter column (the dotted 1D diagrams).
Bif1D scan_1d_param(const std::string& id,
                    const std::vector<std::pair<std::string, std::string>>& base,
                    const ScanAxis& axis, const std::vector<Scalar>& ic, int projection,
                    long transient, long keep, const OrbitOptions& orbit, int threads);

struct BasinOptions {
  long transient = 2000;
  long tail = 200;  // orbit tail points matched against the references
  OrbitOptions orbit;
};

struct BasinRaster {
  int width = 0, height = 0;
  std::vector<CellCode> codes;  // row 0 = top of the window (max y)
  std::string provenance;
};

// Pixel = initial condition; GRAY divergent, GREEN converged to O, otherwise
// the orbit tail is matched to the nearest reference attractor: first
// reference RED, second WHITE. With no references bounded pixels are WHITE.
BasinRaster basin_raster(const PwlMap<2>& map, const std::array<Scalar, 4>& window, int nx,
                         int ny, const std::vector<AttractorSample<2>>& refs,
                         const BasinOptions& opts, int threads);

}  // namespace pwl
