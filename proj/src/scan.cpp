#include "pwl/scan.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <variant>

#include "pwl/catalog.hpp"
#include "pwl/io.hpp"

namespace pwl {
namespace {

// Merge priority when several ICs are probed per cell: evidence of a non-O
// attractor wins, then convergence to O, then an unresolved verdict; GRAY
// only if every probe diverged.
int priority(CellCode c) {
  switch (c) {
    case CellCode::Red: return 3;
    case CellCode::Green: return 2;
    case CellCode::White: return 1;
    case CellCode::Gray: return 0;
  }
  return 0;
}

void check_axis(const ScanAxis& ax) {
  if (ax.n < 1) throw std::invalid_argument("scan axis needs n >= 1");
  if (ax.param.empty()) throw std::invalid_argument("scan axis needs a parameter name");
}

void require_param(const std::string& id, const std::string& name) {
  for (const auto& spec : catalog_params(id))
    if (spec.name == name) return;
  throw std::invalid_argument("map " + id + " has no parameter '" + name + "'");
}

// Static contiguous row blocks; any partition yields the same bytes because
// cells are independent and written by index.
void parallel_rows(int rows, int threads, const std::function<void(int)>& body) {
  if (threads < 1) threads = 1;
  threads = std::min(threads, rows);
  if (threads <= 1) {
    for (int r = 0; r < rows; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const int per = rows / threads, extra = rows % threads;
  int begin = 0;
  for (int w = 0; w < threads; ++w) {
    const int count = per + (w < extra ? 1 : 0);
    const int lo = begin, hi = begin + count;
    begin = hi;
    pool.emplace_back([lo, hi, &body] {
      for (int r = lo; r < hi; ++r) body(r);
    });
  }
  for (auto& t : pool) t.join();
}

std::string list_params(const std::vector<std::pair<std::string, std::string>>& base) {
  std::string s;
  for (const auto& [k, v] : base) s += k + " = " + v + "\n";
  return s;
}

std::string list_ics(const std::vector<std::vector<Scalar>>& ics) {
  std::string s;
  for (const auto& ic : ics) {
    s += "ic =";
    for (Scalar c : ic) s += " " + format_g17(c);
    s += "\n";
  }
  return s;
}

}  // namespace

std::array<std::uint8_t, 3> rgb_for(CellCode c) {
  switch (c) {
    case CellCode::Gray: return {128, 128, 128};
    case CellCode::Green: return {0, 160, 0};
    case CellCode::Red: return {200, 0, 0};
    case CellCode::White: return {255, 255, 255};
  }
  return {0, 0, 0};
}

CellCode code_for(Verdict v) {
  switch (v) {
    case Verdict::Divergent: return CellCode::Gray;
    case Verdict::FixedPoint: return CellCode::Green;
    case Verdict::SegmentCircle:
    case Verdict::Wqa: return CellCode::Red;
    case Verdict::Unresolved: return CellCode::White;
  }
  return CellCode::White;
}

Scalar axis_value(const ScanAxis& ax, int i) {
  if (ax.n == 1) return ax.lo;
  return ax.lo + static_cast<Scalar>(i) * (ax.hi - ax.lo) / static_cast<Scalar>(ax.n - 1);
}

ScanGrid scan_2d_params(const std::string& id,
                        const std::vector<std::pair<std::string, std::string>>& base,
                        const ScanAxis& ax1, const ScanAxis& ax2,
                        const std::vector<std::vector<Scalar>>& ics,
                        const ClassifyOptions& opts, int threads) {
  check_axis(ax1);
  check_axis(ax2);
  require_param(id, ax1.param);
  require_param(id, ax2.param);
  if (ax1.param == ax2.param) throw std::invalid_argument("scan axes must differ");
  if (ics.empty()) throw std::invalid_argument("scan needs at least one initial condition");

  ScanGrid grid;
  grid.width = ax1.n;
  grid.height = ax2.n;
  grid.codes.assign(static_cast<std::size_t>(ax1.n) * static_cast<std::size_t>(ax2.n),
                    CellCode::Gray);

  parallel_rows(ax2.n, threads, [&](int row) {
    // Row 0 is the top of the image: largest axis2 value.
    const Scalar v2 = axis_value(ax2, ax2.n - 1 - row);
    std::vector<std::pair<std::string, std::string>> params = base;
    params.emplace_back(ax1.param, "");
    params.emplace_back(ax2.param, format_g17(v2));
    for (int col = 0; col < ax1.n; ++col) {
      params[params.size() - 2].second = format_g17(axis_value(ax1, col));
      const MapAny map = make_catalog_map(id, params);
      CellCode best = CellCode::Gray;
      bool first = true;
      for (const auto& ic : ics) {
        const Classification cl = classify_attractor(map, ic, opts);
        const CellCode c = code_for(cl.verdict);
        if (first || priority(c) > priority(best)) best = c;
        first = false;
      }
      grid.codes[static_cast<std::size_t>(row) * ax1.n + col] = best;
    }
  });

  grid.provenance = "command = scan2d\nmap = " + id + "\n" + list_params(base) +
                    "axis1 = " + ax1.param + " " + format_g17(ax1.lo) + " " + format_g17(ax1.hi) +
                    " " + std::to_string(ax1.n) + "\n" +
                    "axis2 = " + ax2.param + " " + format_g17(ax2.lo) + " " + format_g17(ax2.hi) +
                    " " + std::to_string(ax2.n) + "\n" + list_ics(ics) +
                    "transient = " + std::to_string(opts.transient) + "\n" +
                    "samples = " + std::to_string(opts.samples) + "\n" +
                    "eps_line = " + format_g17(opts.line.eps_line) + "\n" +
                    "bins = " + std::to_string(opts.line.bins) + "\n" +
                    "l_max = " + std::to_string(opts.line.l_max) + "\n" +
                    "r_div = " + format_g17(opts.orbit.r_div) + "\n";
  return grid;
}

Bif1D scan_1d_param(const std::string& id,
                    const std::vector<std::pair<std::string, std::string>>& base,
                    const ScanAxis& axis, const std::vector<Scalar>& ic, int projection,
                    long transient, long keep, const OrbitOptions& orbit, int threads) {
  check_axis(axis);
  require_param(id, axis.param);
  if (keep < 1) throw std::invalid_argument("scan1d needs keep >= 1");
  const int dim = ic.empty() ? 0 : static_cast<int>(ic.size());
  if (projection < 0 || (dim > 0 && projection >= dim))
    throw std::invalid_argument("projection index out of range");

  // Column results are gathered by index, then concatenated in order.
  std::vector<std::vector<std::pair<Scalar, Scalar>>> cols(static_cast<std::size_t>(axis.n));
  parallel_rows(axis.n, threads, [&](int i) {
    const Scalar v = axis_value(axis, i);
    auto params = base;
    params.emplace_back(axis.param, format_g17(v));
    const MapAny map = make_catalog_map(id, params);
    OrbitOptions o = orbit;
    o.n_transient = transient;
    o.sample_budget = keep;
    o.thin = 1;
    auto& out = cols[static_cast<std::size_t>(i)];
    std::visit(
        [&](const auto& m) {
          constexpr int N = std::decay_t<decltype(m)>::dim;
          if (static_cast<int>(ic.size()) != N)
            throw std::invalid_argument("initial condition has wrong dimension");
          if (projection >= N) throw std::invalid_argument("projection index out of range");
          Vec<N> x0;
          for (int c = 0; c < N; ++c) x0[c] = ic[static_cast<std::size_t>(c)];
          const Orbit<N> ob = iterate(m, x0, transient + keep, o);
          if (ob.status == OrbitStatus::Diverged) return;  // no dots for divergent columns
          if (ob.status == OrbitStatus::ConvergedToO) {
            out.emplace_back(v, 0.0);
            return;
          }
          for (const auto& p : ob.points) out.emplace_back(v, p[projection]);
        },
        map);
  });

  Bif1D result;
  for (const auto& c : cols) result.rows.insert(result.rows.end(), c.begin(), c.end());
  result.provenance = "command = scan1d\nmap = " + id + "\n" + list_params(base) +
                      "axis = " + axis.param + " " + format_g17(axis.lo) + " " +
                      format_g17(axis.hi) + " " + std::to_string(axis.n) + "\n" +
                      list_ics({ic}) + "projection = " + std::to_string(projection) + "\n" +
                      "transient = " + std::to_string(transient) + "\n" +
                      "keep = " + std::to_string(keep) + "\n";
  return result;
}

BasinRaster basin_raster(const PwlMap<2>& map, const std::array<Scalar, 4>& window, int nx,
                         int ny, const std::vector<AttractorSample<2>>& refs,
                         const BasinOptions& opts, int threads) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("basin raster needs nx, ny >= 1");
  if (opts.tail < 1) throw std::invalid_argument("basin raster needs tail >= 1");
  if (refs.size() > 2)
    throw std::invalid_argument("basin palette distinguishes at most two reference attractors");
  for (const auto& r : refs)
    if (r.points.empty()) throw std::invalid_argument("empty reference attractor sample");

  BasinRaster raster;
  raster.width = nx;
  raster.height = ny;
  raster.codes.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny),
                      CellCode::Gray);
  const ScanAxis xs{"x", window[0], window[1], nx};
  const ScanAxis ys{"y", window[2], window[3], ny};

  parallel_rows(ny, threads, [&](int row) {
    const Scalar y = axis_value(ys, ny - 1 - row);  // row 0 = top of the window
    OrbitOptions o = opts.orbit;
    o.n_transient = opts.transient;
    o.sample_budget = opts.tail;
    o.thin = 1;
    for (int col = 0; col < nx; ++col) {
      const Vec2 x0{axis_value(xs, col), y};
      const Orbit<2> ob = iterate(map, x0, opts.transient + opts.tail, o);
      CellCode code;
      if (ob.status == OrbitStatus::Diverged) {
        code = CellCode::Gray;
      } else if (ob.status == OrbitStatus::ConvergedToO) {
        code = CellCode::Green;
      } else if (refs.empty()) {
        code = CellCode::White;
      } else {
        const AttractorSample<2> tail{ob.points, x0, ob.transient_used};
        std::size_t best = 0;
        Scalar best_d = attractor_distance<2>(tail, refs[0]);
        for (std::size_t i = 1; i < refs.size(); ++i) {
          const Scalar d = attractor_distance<2>(tail, refs[i]);
          if (d < best_d) { best_d = d; best = i; }
        }
        code = best == 0 ? CellCode::Red : CellCode::White;
      }
      raster.codes[static_cast<std::size_t>(row) * nx + col] = code;
    }
  });

  std::string prov = "command = basin\nmap = " + map.id + "\n";
  for (const auto& [k, v] : map.params) prov += k + " = " + format_g17(v) + "\n";
  prov += "window = " + format_g17(window[0]) + " " + format_g17(window[1]) + " " +
          format_g17(window[2]) + " " + format_g17(window[3]) + "\n" +
          "grid = " + std::to_string(nx) + " " + std::to_string(ny) + "\n" +
          "transient = " + std::to_string(opts.transient) + "\n" +
          "tail = " + std::to_string(opts.tail) + "\n" +
          "references = " + std::to_string(refs.size()) + "\n";
  for (const auto& r : refs) {
    prov += "ref_ic =";
    for (int c = 0; c < 2; ++c) prov += " " + format_g17(r.x0[c]);
    prov += "\n";
  }
  raster.provenance = prov;
  return raster;
}

}  // namespace pwl
