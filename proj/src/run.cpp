#include "pwl/run.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <random>
#include <sstream>

#include "pwl/catalog.hpp"
#include "pwl/classifier.hpp"
#include "pwl/critical_images.hpp"
#include "pwl/io.hpp"
#include "pwl/scan.hpp"

namespace pwl {
namespace {

using Section = std::map<std::string, std::string>;

const Section& section_or_empty(const RunConfig& cfg, const std::string& name) {
  static const Section empty;
  const auto it = cfg.sections.find(name);
  return it == cfg.sections.end() ? empty : it->second;
}

long get_long(const Section& s, const char* key, long def) {
  const auto it = s.find(key);
  return it == s.end() ? def : std::strtol(it->second.c_str(), nullptr, 10);
}

Scalar get_num(const Section& s, const char* key, Scalar def) {
  const auto it = s.find(key);
  return it == s.end() ? def : std::strtod(it->second.c_str(), nullptr);
}

std::string get_word(const Section& s, const char* key, const std::string& def) {
  const auto it = s.find(key);
  return it == s.end() ? def : it->second;
}

std::optional<std::vector<Scalar>> get_list(const Section& s, const char* key) {
  const auto it = s.find(key);
  if (it == s.end()) return std::nullopt;
  std::istringstream in(it->second);
  std::vector<Scalar> out;
  Scalar v;
  while (in >> v) out.push_back(v);
  return out;
}

std::vector<Scalar> default_ic(int dim) {
  return std::vector<Scalar>(static_cast<std::size_t>(dim), 0.1);
}

// Engine output is standard-specified; the [0,1) scaling is done by hand so
// the IC list is identical across standard libraries.
std::vector<std::vector<Scalar>> seeded_ics(const std::vector<Scalar>& primary, int extra,
                                            std::uint64_t seed) {
  std::vector<std::vector<Scalar>> ics{primary};
  std::mt19937_64 eng(seed);
  for (int i = 0; i < extra; ++i) {
    std::vector<Scalar> ic(primary.size());
    for (auto& c : ic) {
      const Scalar u = static_cast<Scalar>(eng() >> 11) * 0x1.0p-53;
      c = -2.0 + 4.0 * u;
    }
    ics.push_back(std::move(ic));
  }
  return ics;
}

std::vector<Scalar> resolve_ic(const RunConfig& cfg, int dim) {
  if (!cfg.ic) return default_ic(dim);
  if (static_cast<int>(cfg.ic->size()) != dim)
    throw ConfigError(0, "ic has " + std::to_string(cfg.ic->size()) +
                             " coordinates but map " + cfg.map_id + " is " +
                             std::to_string(dim) + "-dimensional");
  return *cfg.ic;
}

const char* kind_word(CmVerdict::Kind k) {
  switch (k) {
    case CmVerdict::Kind::PeriodicFilled: return "periodic-filled";
    case CmVerdict::Kind::Quasiperiodic: return "quasiperiodic";
    case CmVerdict::Kind::FixedPointO: return "fixed-point-O";
    case CmVerdict::Kind::Divergent: return "divergent";
  }
  return "?";
}

std::string summarize(const Classification& c) {
  std::string s = to_string(c.verdict);
  switch (c.verdict) {
    case Verdict::Divergent:
      s += " steps=" + std::to_string(c.steps);
      break;
    case Verdict::FixedPoint:
      s += " steps=" + std::to_string(c.steps);
      break;
    case Verdict::SegmentCircle: {
      if (c.cm_verdict) {
        s += std::string(" ") + kind_word(c.cm_verdict->kind);
        if (c.cm_verdict->kind == CmVerdict::Kind::PeriodicFilled)
          s += " period=" + std::to_string(c.cm_verdict->period);
      }
      if (c.rotation) s += " rho=" + format_g17(c.rotation->rho);
      s += " support-lines=" + std::to_string(c.support_angles.size());
      if (c.return_map)
        s += " branches=" + std::to_string(c.return_map->cm.slopes.size());
      break;
    }
    case Verdict::Wqa:
      s += " support-lines=none return=" +
           (c.return_failure.empty() ? std::string("not-attempted") : c.return_failure);
      break;
    case Verdict::Unresolved:
      if (!c.note.empty()) s += " " + c.note;
      break;
  }
  if (c.lyapunov) s += " lyapunov=" + format_g17(*c.lyapunov);
  return s;
}

std::string code_counts(const std::vector<CellCode>& codes) {
  long n[4] = {0, 0, 0, 0};
  for (CellCode c : codes) ++n[static_cast<int>(c)];
  return "gray=" + std::to_string(n[0]) + " green=" + std::to_string(n[1]) +
         " red=" + std::to_string(n[2]) + " white=" + std::to_string(n[3]);
}

void write_raster(const std::string& path, int width, int height,
                  const std::vector<CellCode>& codes, const std::string& provenance) {
  std::vector<std::array<std::uint8_t, 3>> px(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) px[i] = rgb_for(codes[i]);
  write_ppm(path, width, height, px);
  write_text_file(path + ".txt", provenance);
}

ClassifyOptions classify_opts_from(const Section& s) {
  ClassifyOptions o;
  o.transient = get_long(s, "transient", o.transient);
  o.samples = get_long(s, "samples", o.samples);
  return o;
}

// Reduced budgets for per-cell scan classification: color resolution only.
ClassifyOptions scan_lite_opts(const Section& s) {
  ClassifyOptions o;
  o.transient = get_long(s, "transient", 2000);
  o.samples = get_long(s, "samples", 2000);
  o.attempt_return_map = false;
  o.diagnostics = false;
  o.divergence_horizon = 0;
  return o;
}

int cmd_orbit(const RunConfig& cfg, const MapAny& map, const RunOptions& ro,
              std::ostream& out) {
  const Section& s = section_or_empty(cfg, "orbit");
  const long steps = get_long(s, "steps", 1000);
  const long transient = get_long(s, "transient", 0);
  const long thin = get_long(s, "thin", 1);
  if (steps < 1) throw ConfigError(0, "[orbit] needs steps >= 1");
  if (transient < 0 || thin < 1) throw ConfigError(0, "[orbit] needs transient >= 0, thin >= 1");

  std::visit(
      [&](const auto& m) {
        constexpr int N = std::decay_t<decltype(m)>::dim;
        const auto ic = resolve_ic(cfg, N);
        Vec<N> x0;
        for (int i = 0; i < N; ++i) x0[i] = ic[static_cast<std::size_t>(i)];
        OrbitOptions o;
        o.n_transient = transient;
        o.sample_budget = steps;
        o.thin = thin;
        const Orbit<N> orbit = iterate(m, x0, transient + steps * thin, o);
        if (!ro.out.empty()) {
          CsvWriter csv(ro.out);
          std::vector<std::string> head{"step"};
          const char* coord[3] = {"x", "y", "z"};
          for (int i = 0; i < N; ++i) head.emplace_back(coord[i]);
          head.emplace_back("region");
          csv.row(head);
          for (std::size_t i = 0; i < orbit.points.size(); ++i) {
            std::vector<std::string> row{
                std::to_string(transient + static_cast<long>(i) * thin + 1)};
            for (int c = 0; c < N; ++c) row.push_back(format_g17(orbit.points[i][c]));
            row.push_back(m.label(region_of(m, orbit.points[i])));
            csv.row(row);
          }
          csv.flush();
        }
        out << to_string(orbit.status) << " steps=" << orbit.steps
            << " samples=" << orbit.points.size() << "\n";
      },
      map);
  return 0;
}

int cmd_classify(const RunConfig& cfg, const MapAny& map, const RunOptions& ro,
                 std::uint64_t seed, std::ostream& out) {
  const Section& s = section_or_empty(cfg, "classify");
  const ClassifyOptions opts = classify_opts_from(s);
  const int extra = static_cast<int>(get_long(s, "extra_ics", 0));
  const int dim = map_dimension(map);
  const auto ics = seeded_ics(resolve_ic(cfg, dim), extra, seed);

  bool first = true;
  for (const auto& ic : ics) {
    const Classification c = classify_attractor(map, ic, opts);
    out << summarize(c) << "\n";
    if (first && !ro.out.empty()) {
      // Dump the primary IC's attractor cloud for plotting.
      std::visit(
          [&](const auto& m) {
            constexpr int N = std::decay_t<decltype(m)>::dim;
            Vec<N> x0;
            for (int i = 0; i < N; ++i) x0[i] = ic[static_cast<std::size_t>(i)];
            const auto sr = omega_limit_sample(m, x0, opts);
            CsvWriter csv(ro.out);
            const char* coord[3] = {"x", "y", "z"};
            std::vector<std::string> head;
            for (int i = 0; i < N; ++i) head.emplace_back(coord[i]);
            csv.row(head);
            if (sr.sample)
              for (const auto& p : sr.sample->points) {
                std::vector<std::string> row;
                for (int c2 = 0; c2 < N; ++c2) row.push_back(format_g17(p[c2]));
                csv.row(row);
              }
            csv.flush();
          },
          map);
    }
    first = false;
  }
  return 0;
}

int cmd_return_map(const RunConfig& cfg, const MapAny& map, const RunOptions& ro,
                   std::ostream& out) {
  const Section& s = section_or_empty(cfg, "return-map");
  if (!s.count("slope") || !s.count("seg"))
    throw ConfigError(0, "[return-map] needs slope and seg");
  if (map_dimension(map) != 2) throw ConfigError(0, "return-map needs a 2D map");
  const Scalar m = get_num(s, "slope", 0);
  const auto seg = *get_list(s, "seg");
  ReturnMapOptions opts;
  opts.probes = static_cast<int>(get_long(s, "probes", opts.probes));
  opts.k_max = get_long(s, "k_max", opts.k_max);

  const auto& map2 = std::get<PwlMap<2>>(map);
  const BuildResult r = build_return_map(map2, m, {seg[0], seg[1]}, opts);
  if (!r.ok()) {
    out << "FAILURE(" << to_string(r.failure) << ") " << r.detail << "\n";
    return 1;
  }
  const ReturnMap1D& rm = *r.map;
  const RotationResult rho = rotation_number(rm.cm);
  if (!ro.out.empty()) {
    CsvWriter csv(ro.out);
    csv.row({"x_in", "x_out", "branch", "return_time", "slope", "sequence"});
    const auto [lo, hi] = *rm.cm.domain;
    const int n = std::max(2, opts.probes);
    for (int i = 0; i < n; ++i) {
      const Scalar x = lo + (hi - lo) * static_cast<Scalar>(i) / static_cast<Scalar>(n - 1);
      const int b = cm_branch(rm.cm, x);
      csv.row({format_g17(x), format_g17(cm_eval(rm.cm, x)), std::to_string(b),
               std::to_string(rm.cm.return_times[static_cast<std::size_t>(b)]),
               format_g17(rm.cm.slopes[static_cast<std::size_t>(b)]),
               rm.cm.sequences[static_cast<std::size_t>(b)]});
    }
    csv.flush();
  }
  out << "branches=" << rm.cm.slopes.size() << " domain=["
      << format_g17(rm.cm.domain->first) << "," << format_g17(rm.cm.domain->second)
      << "] rho=" << format_g17(rho.rho) << "\n";
  return 0;
}

int cmd_rotation(const RunConfig& cfg, const MapAny& map, const RunOptions& ro,
                 std::ostream& out) {
  if (map_dimension(map) != 1) throw ConfigError(0, "rotation needs a 1D map");
  const Section& s = section_or_empty(cfg, "rotation");
  RotationOptions opts;
  opts.orbit_steps = get_long(s, "steps", opts.orbit_steps);
  opts.max_pq = get_long(s, "max_pq", opts.max_pq);
  opts.rational_tol = get_num(s, "tol", opts.rational_tol);

  const CircleMap1D f = to_circle_map(std::get<PwlMap<1>>(map));
  const RotationResult r = rotation_number(f, opts);
  if (!ro.out.empty()) {
    const auto iv = invariant_interval(f);
    CsvWriter csv(ro.out);
    csv.row({"x", "fx", "branch"});
    const int n = 512;
    for (int i = 0; i < n; ++i) {
      const Scalar x =
          iv.first + (iv.second - iv.first) * static_cast<Scalar>(i) / static_cast<Scalar>(n - 1);
      csv.row({format_g17(x), format_g17(cm_eval(f, x)), std::to_string(cm_branch(f, x))});
    }
    csv.flush();
  }
  out << "rho=" << format_g17(r.rho);
  if (r.certificate)
    out << " certificate=" << r.certificate->first << "/"
        << (r.certificate->first + r.certificate->second);
  else
    out << " certificate=none";
  out << " method="
      << (r.method == RotationResult::Method::ClosedForm ? "closed-form" : "orbit-frequency")
      << "\n";
  return 0;
}

int cmd_scan1d(const RunConfig& cfg, const RunOptions& ro, std::ostream& out) {
  const Section& s = section_or_empty(cfg, "scan1d");
  for (const char* k : {"axis", "lo", "hi", "n"})
    if (!s.count(k)) throw ConfigError(0, std::string("[scan1d] needs ") + k);
  ScanAxis axis{get_word(s, "axis", ""), get_num(s, "lo", 0), get_num(s, "hi", 0),
                static_cast<int>(get_long(s, "n", 0))};
  const std::string proj_word = get_word(s, "projection", "x");
  const int projection = proj_word == "x" ? 0 : proj_word == "y" ? 1 : 2;
  const long transient = get_long(s, "transient", 2000);
  const long keep = get_long(s, "keep", 200);

  // Dimension is needed for the IC before any map is built: probe the family
  // once at the axis midpoint.
  std::vector<std::pair<std::string, std::string>> probe = cfg.map_params;
  probe.emplace_back(axis.param, format_g17((axis.lo + axis.hi) / 2));
  const int dim = map_dimension(make_catalog_map(cfg.map_id, probe));
  const auto ic = resolve_ic(cfg, dim);

  const Bif1D data = scan_1d_param(cfg.map_id, cfg.map_params, axis, ic, projection, transient,
                                   keep, OrbitOptions{}, ro.threads);
  if (!ro.out.empty()) {
    CsvWriter csv(ro.out);
    csv.row({axis.param, proj_word});
    for (const auto& [p, v] : data.rows) csv.row({format_g17(p), format_g17(v)});
    csv.flush();
    write_text_file(ro.out + ".txt", data.provenance);
  }
  out << "rows=" << data.rows.size() << (ro.out.empty() ? "" : " wrote " + ro.out) << "\n";
  return 0;
}

int cmd_scan2d(const RunConfig& cfg, const RunOptions& ro, std::uint64_t seed,
               std::ostream& out) {
  const Section& s = section_or_empty(cfg, "scan2d");
  for (const char* k : {"axis1", "lo1", "hi1", "n1", "axis2", "lo2", "hi2", "n2"})
    if (!s.count(k)) throw ConfigError(0, std::string("[scan2d] needs ") + k);
  if (ro.out.empty()) throw ConfigError(0, "scan2d needs --out for the image");
  ScanAxis ax1{get_word(s, "axis1", ""), get_num(s, "lo1", 0), get_num(s, "hi1", 0),
               static_cast<int>(get_long(s, "n1", 0))};
  ScanAxis ax2{get_word(s, "axis2", ""), get_num(s, "lo2", 0), get_num(s, "hi2", 0),
               static_cast<int>(get_long(s, "n2", 0))};

  std::vector<std::pair<std::string, std::string>> probe = cfg.map_params;
  probe.emplace_back(ax1.param, format_g17((ax1.lo + ax1.hi) / 2));
  probe.emplace_back(ax2.param, format_g17((ax2.lo + ax2.hi) / 2));
  const int dim = map_dimension(make_catalog_map(cfg.map_id, probe));
  const int extra = static_cast<int>(get_long(s, "extra_ics", 0));
  const auto ics = seeded_ics(resolve_ic(cfg, dim), extra, seed);

  const ScanGrid grid = scan_2d_params(cfg.map_id, cfg.map_params, ax1, ax2, ics,
                                       scan_lite_opts(s), ro.threads);
  write_raster(ro.out, grid.width, grid.height, grid.codes, grid.provenance);
  out << code_counts(grid.codes) << " wrote " << ro.out << "\n";
  return 0;
}

int cmd_basin(const RunConfig& cfg, const MapAny& map, const RunOptions& ro,
              std::ostream& out) {
  const Section& s = section_or_empty(cfg, "basin");
  for (const char* k : {"window", "nx", "ny"})
    if (!s.count(k)) throw ConfigError(0, std::string("[basin] needs ") + k);
  if (ro.out.empty()) throw ConfigError(0, "basin needs --out for the image");
  if (map_dimension(map) != 2) throw ConfigError(0, "basin needs a 2D map");
  const auto& map2 = std::get<PwlMap<2>>(map);
  const auto w = *get_list(s, "window");
  BasinOptions opts;
  opts.transient = get_long(s, "transient", opts.transient);
  opts.tail = get_long(s, "tail", opts.tail);

  std::vector<AttractorSample<2>> refs;
  for (const char* key : {"ref1", "ref2"}) {
    const auto ic = get_list(s, key);
    if (!ic) continue;
    const Vec2 x0{(*ic)[0], (*ic)[1]};
    const auto sr = omega_limit_sample(map2, x0, ClassifyOptions{});
    if (!sr.sample)
      throw std::runtime_error(std::string(key) + ": reference orbit ended " +
                               to_string(sr.status) + ", no attractor to match against");
    refs.push_back(*sr.sample);
  }

  const BasinRaster raster = basin_raster(map2, {w[0], w[1], w[2], w[3]},
                                          static_cast<int>(get_long(s, "nx", 0)),
                                          static_cast<int>(get_long(s, "ny", 0)), refs, opts,
                                          ro.threads);
  write_raster(ro.out, raster.width, raster.height, raster.codes, raster.provenance);
  out << code_counts(raster.codes) << " wrote " << ro.out << "\n";
  return 0;
}

int cmd_critical_images(const RunConfig& cfg, const MapAny& map, const RunOptions& ro,
                        std::ostream& out) {
  const Section& s = section_or_empty(cfg, "critical-images");
  if (!s.count("seg")) throw ConfigError(0, "[critical-images] needs seg");
  if (map_dimension(map) != 2) throw ConfigError(0, "critical-images needs a 2D map");
  const auto seg = *get_list(s, "seg");
  const int depth = static_cast<int>(get_long(s, "depth", 8));

  const auto& map2 = std::get<PwlMap<2>>(map);
  const CriticalImagesResult r =
      critical_images(map2, Segment2{Vec2{seg[0], seg[1]}, Vec2{seg[2], seg[3]}}, depth);
  if (!ro.out.empty()) {
    CsvWriter csv(ro.out);
    csv.row({"depth", "parent", "ax", "ay", "bx", "by"});
    for (const auto& si : r.segments)
      csv.row({std::to_string(si.depth), std::to_string(si.parent), format_g17(si.seg.a.x()),
               format_g17(si.seg.a.y()), format_g17(si.seg.b.x()), format_g17(si.seg.b.y())});
    csv.flush();
  }
  out << "segments=" << r.segments.size() << " depth=" << depth << " hull_stabilized="
      << (r.hull_stabilized ? "true" : "false") << "\n";
  return 0;
}

}  // namespace

int run_command(const RunConfig& cfg, const RunOptions& ro, std::ostream& out,
                std::ostream& err) {
  try {
    const std::uint64_t seed = ro.seed.value_or(cfg.seed);
    if (ro.command == "scan1d") return cmd_scan1d(cfg, ro, out);
    if (ro.command == "scan2d") return cmd_scan2d(cfg, ro, seed, out);

    const MapAny map = make_catalog_map(cfg.map_id, cfg.map_params);
    if (ro.command == "orbit") return cmd_orbit(cfg, map, ro, out);
    if (ro.command == "classify") return cmd_classify(cfg, map, ro, seed, out);
    if (ro.command == "return-map") return cmd_return_map(cfg, map, ro, out);
    if (ro.command == "rotation") return cmd_rotation(cfg, map, ro, out);
    if (ro.command == "basin") return cmd_basin(cfg, map, ro, out);
    if (ro.command == "critical-images") return cmd_critical_images(cfg, map, ro, out);
    err << "error: unknown command '" << ro.command << "'\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pwl
