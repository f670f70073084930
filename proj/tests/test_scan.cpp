#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pwl/catalog.hpp"
#include "pwl/io.hpp"
#include "pwl/scan.hpp"

using namespace pwl;

namespace {

ClassifyOptions lite() {
  ClassifyOptions o;
  o.transient = 1500;
  o.samples = 1500;
  o.attempt_return_map = false;
  o.diagnostics = false;
  o.divergence_horizon = 2000;
  return o;
}

const std::vector<std::pair<std::string, std::string>> kSinkBase = {
    {"tauR", "-0.5"}, {"deltaR", "0.8"}, {"h", "-1"}};  // slice with coexisting sink and chaotic set

}  // namespace

TEST_CASE("palette bytes and verdict codes are pinned") {
  CHECK(rgb_for(CellCode::Gray) == std::array<std::uint8_t, 3>{128, 128, 128});
  CHECK(rgb_for(CellCode::Green) == std::array<std::uint8_t, 3>{0, 160, 0});
  CHECK(rgb_for(CellCode::Red) == std::array<std::uint8_t, 3>{200, 0, 0});
  CHECK(rgb_for(CellCode::White) == std::array<std::uint8_t, 3>{255, 255, 255});
  CHECK(code_for(Verdict::Divergent) == CellCode::Gray);
  CHECK(code_for(Verdict::FixedPoint) == CellCode::Green);
  CHECK(code_for(Verdict::SegmentCircle) == CellCode::Red);
  CHECK(code_for(Verdict::Wqa) == CellCode::Red);  // any attractor off O shares the color
  CHECK(code_for(Verdict::Unresolved) == CellCode::White);
}

TEST_CASE("axis values: inclusive endpoints and exact refinement") {
  const ScanAxis a5{"p", 0.1, 0.9, 5};
  const ScanAxis a9{"p", 0.1, 0.9, 9};
  CHECK(axis_value(a5, 0) == 0.1);
  CHECK(axis_value(a5, 4) == 0.9);
  for (int i = 0; i < 5; ++i) CHECK(axis_value(a5, i) == axis_value(a9, 2 * i));
  const ScanAxis one{"p", 0.3, 0.7, 1};
  CHECK(axis_value(one, 0) == 0.3);
}

TEST_CASE("2D scan matches per-cell classification and keeps row 0 on top") {
  const ScanAxis ax1{"deltaL", 0.9, 1.2, 3};
  const ScanAxis ax2{"tauL", 0.6, 1.1, 3};
  const std::vector<std::vector<Scalar>> ics = {{0.01, 0.0}};
  const ClassifyOptions opts = lite();
  const ScanGrid grid = scan_2d_params("T1", kSinkBase, ax1, ax2, ics, opts, 1);
  REQUIRE(grid.width == 3);
  REQUIRE(grid.height == 3);
  REQUIRE(grid.codes.size() == 9);

  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      auto params = kSinkBase;
      params.emplace_back("deltaL", format_g17(axis_value(ax1, col)));
      params.emplace_back("tauL", format_g17(axis_value(ax2, 2 - row)));
      const Classification c = classify_attractor(make_catalog_map("T1", params), ics[0], opts);
      CHECK(grid.codes[row * 3 + col] == code_for(c.verdict));
    }
  }

  CHECK(grid.provenance.find("command = scan2d") != std::string::npos);
  CHECK(grid.provenance.find("map = T1") != std::string::npos);
  CHECK(grid.provenance.find("axis1 = deltaL") != std::string::npos);
  CHECK(grid.provenance.find("axis2 = tauL") != std::string::npos);
  CHECK(grid.provenance.find("ic = 0.01 0") != std::string::npos);
}

TEST_CASE("2D scan bytes do not depend on the worker count") {
  const ScanAxis ax1{"deltaL", 0.9, 1.2, 3};
  const ScanAxis ax2{"tauL", 0.6, 1.1, 4};
  const std::vector<std::vector<Scalar>> ics = {{0.01, 0.0}};
  const ScanGrid g1 = scan_2d_params("T1", kSinkBase, ax1, ax2, ics, lite(), 1);
  const ScanGrid g4 = scan_2d_params("T1", kSinkBase, ax1, ax2, ics, lite(), 4);
  const ScanGrid g8 = scan_2d_params("T1", kSinkBase, ax1, ax2, ics, lite(), 8);
  CHECK(g1.codes == g4.codes);
  CHECK(g1.codes == g8.codes);
}

TEST_CASE("multiple ICs merge with the non-O attractor dominating") {
  const std::vector<std::pair<std::string, std::string>> base = {
      {"tauL", "1"}, {"deltaL", "1.1"}, {"h", "-1"}};
  const ScanAxis ax1{"tauR", -0.5, -0.5, 1};
  const ScanAxis ax2{"deltaR", 0.8, 0.8, 1};
  const ClassifyOptions opts = lite();
  // the first IC falls into the basin of O, the second finds the coexisting attractor
  const ScanGrid green = scan_2d_params("T1", base, ax1, ax2, {{0.01, 0.0}}, opts, 1);
  CHECK(green.codes[0] == CellCode::Green);
  const ScanGrid merged =
      scan_2d_params("T1", base, ax1, ax2, {{0.01, 0.0}, {-3.0, -1.0}}, opts, 1);
  CHECK(merged.codes[0] == CellCode::Red);
}

TEST_CASE("2D scan argument validation") {
  const ScanAxis good{"deltaL", 0.9, 1.2, 2};
  const ScanAxis bad_name{"zeta", 0, 1, 2};
  const ScanAxis bad_n{"tauL", 0, 1, 0};
  const std::vector<std::vector<Scalar>> ics = {{0.1, 0.1}};
  CHECK_THROWS_AS(scan_2d_params("T1", kSinkBase, bad_name, good, ics, lite(), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(scan_2d_params("T1", kSinkBase, bad_n, good, ics, lite(), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(scan_2d_params("T1", kSinkBase, good, good, ics, lite(), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(scan_2d_params("T1", kSinkBase, good, ScanAxis{"tauL", 0, 1, 2}, {}, lite(), 1),
                  std::invalid_argument);
}

TEST_CASE("1D sweep: converged, circle-map and divergent columns") {
  const ScanAxis axis{"sL", 0.5, 2.0, 2};
  const Bif1D bif = scan_1d_param("F", {{"sR", "0.8"}}, axis, {1.3}, 0, 200, 5, {}, 1);
  REQUIRE(bif.rows.size() == 6);  // 1 collapsed row + 5 samples
  CHECK(bif.rows[0].first == 0.5);
  CHECK(bif.rows[0].second == 0.0);  // converged column collapses onto O
  for (int i = 1; i < 6; ++i) CHECK(bif.rows[i].first == 2.0);

  // the sampled column reproduces a plain orbit of the same budget
  const auto m = std::get<PwlMap1>(make_catalog_map("F", {{"sR", "0.8"}, {"sL", "2"}}));
  OrbitOptions o;
  o.n_transient = 200;
  o.sample_budget = 5;
  o.thin = 1;
  Vec<1> x0;
  x0 << 1.3;
  const Orbit<1> ob = iterate(m, x0, 205, o);
  for (int i = 0; i < 5; ++i) CHECK(bif.rows[i + 1].second == ob.points[i][0]);

  const Bif1D gone =
      scan_1d_param("F", {{"sR", "1.5"}}, ScanAxis{"sL", 2.0, 2.0, 1}, {1.3}, 0, 100, 5, {}, 1);
  CHECK(gone.rows.empty());  // divergent columns leave no dots

  CHECK(bif.provenance.find("command = scan1d") != std::string::npos);
  CHECK(bif.provenance.find("projection = 0") != std::string::npos);
}

TEST_CASE("1D sweep is thread-count independent and validates input") {
  const ScanAxis axis{"sL", 1.2, 2.0, 6};
  const Bif1D a = scan_1d_param("F", {{"sR", "0.8"}}, axis, {1.3}, 0, 100, 7, {}, 1);
  const Bif1D b = scan_1d_param("F", {{"sR", "0.8"}}, axis, {1.3}, 0, 100, 7, {}, 3);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].first == b.rows[i].first);
    CHECK(a.rows[i].second == b.rows[i].second);
  }
  CHECK_THROWS_AS(scan_1d_param("F", {{"sR", "0.8"}}, axis, {1.3}, 0, 100, 0, {}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(scan_1d_param("F", {{"sR", "0.8"}}, axis, {1.3}, 1, 100, 5, {}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(scan_1d_param("F", {{"sR", "0.8"}}, axis, {1.3, 0.0}, 0, 100, 5, {}, 1),
                  std::invalid_argument);
}

TEST_CASE("basin raster: palette, orientation and determinism") {
  const auto m = std::get<PwlMap2>(make_catalog_map(
      "T1", {{"tauL", "1"}, {"deltaL", "1.1"}, {"tauR", "-0.5"}, {"deltaR", "0.8"},
             {"h", "-1"}}));
  ClassifyOptions ref_opts;
  ref_opts.transient = 2000;
  ref_opts.samples = 400;
  const auto ref = omega_limit_sample(m, Vec2(-3.0, -1.0), ref_opts);
  REQUIRE(ref.sample.has_value());

  BasinOptions opts;
  opts.transient = 500;
  opts.tail = 50;
  const std::array<Scalar, 4> window{-4.0, 4.0, -4.0, 4.0};
  const BasinRaster r1 = basin_raster(m, window, 9, 9, {*ref.sample}, opts, 1);
  REQUIRE(r1.codes.size() == 81);
  CHECK(r1.codes[4 * 9 + 4] == CellCode::Green);  // the center pixel starts at O
  long reds = 0;
  for (const CellCode c : r1.codes) reds += c == CellCode::Red;
  CHECK(reds > 0);

  const BasinRaster r4 = basin_raster(m, window, 9, 9, {*ref.sample}, opts, 4);
  CHECK(r1.codes == r4.codes);

  CHECK(r1.provenance.find("command = basin") != std::string::npos);
  CHECK(r1.provenance.find("references = 1") != std::string::npos);
  CHECK(r1.provenance.find("ref_ic = -3 -1") != std::string::npos);

  // without references every bounded non-O pixel is conservative white
  const BasinRaster open = basin_raster(m, window, 5, 5, {}, opts, 1);
  for (const CellCode c : open.codes)
    CHECK((c == CellCode::White || c == CellCode::Green || c == CellCode::Gray));
}

TEST_CASE("basin raster argument validation") {
  const auto m = std::get<PwlMap2>(make_catalog_map(
      "T1", {{"tauL", "1"}, {"deltaL", "1.1"}, {"tauR", "-0.5"}, {"deltaR", "0.8"},
             {"h", "-1"}}));
  const std::array<Scalar, 4> window{-1.0, 1.0, -1.0, 1.0};
  AttractorSample<2> s{{Vec2(1, 1)}, Vec2(1, 1), 0};
  AttractorSample<2> hollow{{}, Vec2(0, 0), 0};
  BasinOptions opts;
  CHECK_THROWS_AS(basin_raster(m, window, 0, 4, {}, opts, 1), std::invalid_argument);
  CHECK_THROWS_AS(basin_raster(m, window, 4, 4, {s, s, s}, opts, 1), std::invalid_argument);
  CHECK_THROWS_AS(basin_raster(m, window, 4, 4, {hollow}, opts, 1), std::invalid_argument);
  BasinOptions zero_tail;
  zero_tail.tail = 0;
  CHECK_THROWS_AS(basin_raster(m, window, 4, 4, {}, zero_tail, 1), std::invalid_argument);
}
