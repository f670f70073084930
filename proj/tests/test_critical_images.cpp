#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pwl/catalog.hpp"
#include "pwl/critical_images.hpp"

using namespace pwl;

namespace {

PwlMap2 make2(const char* id, const std::vector<std::pair<std::string, std::string>>& kv) {
  return std::get<PwlMap2>(make_catalog_map(id, kv));
}

PwlMap2 whole_plane(const Mat2& a) {
  Region<2> all{{HalfSpace<2>{Vec2::Zero(), 0.0, false}}, "all"};  // 0 >= 0 everywhere
  return PwlMap2({all}, {LinearPiece<2>{a}});
}

}  // namespace

TEST_CASE("depth 0 returns just the seed") {
  const auto m = make2("T1", {{"tauL", "0.8"}, {"deltaL", "0.98"}, {"tauR", "0.5"},
                              {"deltaR", "1"}, {"h", "-1"}});
  const auto res = critical_images(m, {Vec2(-2, 0), Vec2(0, 0)}, 0);
  REQUIRE(res.segments.size() == 1);
  CHECK(res.segments[0].depth == 0);
  CHECK(res.segments[0].parent == -1);
  CHECK(res.hull_stabilized);
}

TEST_CASE("a segment across the border splits at the crossing") {
  const auto m = make2("T1", {{"tauL", "0.8"}, {"deltaL", "0.98"}, {"tauR", "0.5"},
                              {"deltaR", "1"}, {"h", "-1"}});
  // [-2,0] x {0} crosses x = -1; J(tau,delta) sends (x,0) to (tau x, -delta x)
  const auto res = critical_images(m, {Vec2(-2, 0), Vec2(0, 0)}, 1);
  REQUIRE(res.segments.size() == 3);
  const auto& l = res.segments[1];
  const auto& r = res.segments[2];
  CHECK(l.depth == 1);
  CHECK(l.parent == 0);
  CHECK(r.parent == 0);
  CHECK((l.seg.a - Vec2(-1.6, 1.96)).norm() < 1e-14);
  CHECK((l.seg.b - Vec2(-0.8, 0.98)).norm() < 1e-14);
  CHECK((r.seg.a - Vec2(-0.5, 1.0)).norm() < 1e-14);
  CHECK(r.seg.b.norm() < 1e-14);
}

TEST_CASE("a segment across a circular border splits at both crossings") {
  const auto m = make2("T7", {{"tauL", "0.9"}, {"deltaL", "0.6"}, {"tauR", "0.8"},
                              {"deltaR", "1.4"}});
  // the horizontal chord [-2,2] x {0} meets the unit circle at x = +-1
  const auto res = critical_images(m, {Vec2(-2, 0), Vec2(2, 0)}, 1);
  REQUIRE(res.segments.size() == 4);
  // outside | inside | outside pieces, in order along the chord
  CHECK((res.segments[1].seg.a - Vec2(-1.8, 1.2)).norm() < 1e-12);   // L endpoint of (-2,0)
  CHECK((res.segments[2].seg.a - Vec2(-0.8, 1.4)).norm() < 1e-12);   // R endpoint of (-1,0)
  CHECK((res.segments[2].seg.b - Vec2(0.8, -1.4)).norm() < 1e-12);   // R endpoint of (1,0)
  CHECK((res.segments[3].seg.b - Vec2(1.8, -1.2)).norm() < 1e-12);   // L endpoint of (2,0)
}

TEST_CASE("generations chain through parents") {
  const auto m = make2("T1", {{"tauL", "0.8"}, {"deltaL", "0.98"}, {"tauR", "0.5"},
                              {"deltaR", "1"}, {"h", "-1"}});
  const auto res = critical_images(m, {Vec2(-2, 0), Vec2(0, 0)}, 4);
  int max_depth = 0;
  for (size_t i = 1; i < res.segments.size(); ++i) {
    const auto& s = res.segments[i];
    REQUIRE(s.parent >= 0);
    REQUIRE(s.parent < static_cast<int>(i));
    CHECK(s.depth == res.segments[s.parent].depth + 1);
    max_depth = std::max(max_depth, s.depth);
  }
  CHECK(max_depth == 4);
}

TEST_CASE("hull stabilizes once images settle on an invariant segment") {
  Mat2 proj;
  proj << 1, 0, 0, 0;  // projection onto the x axis; images freeze after one step
  const auto m = whole_plane(proj);
  const auto res = critical_images(m, {Vec2(0, -1), Vec2(1, 2)}, 3);
  CHECK(res.hull_stabilized);
  const auto& last = res.segments.back();
  CHECK(last.depth == 3);
  CHECK((last.seg.a - Vec2(0, 0)).norm() < 1e-14);
  CHECK((last.seg.b - Vec2(1, 0)).norm() < 1e-14);
}

TEST_CASE("an expanding map keeps growing the hull") {
  const auto m = whole_plane(Mat2(2 * Mat2::Identity()));
  const auto res = critical_images(m, {Vec2(0, 1), Vec2(1, 1)}, 3);
  CHECK(!res.hull_stabilized);
}

TEST_CASE("escape beyond r_div throws") {
  const auto m = whole_plane(Mat2(10 * Mat2::Identity()));
  CHECK_THROWS_AS(critical_images(m, {Vec2(0, 1), Vec2(1, 1)}, 10, 1e3), std::runtime_error);
}

TEST_CASE("slivers below min_len are dropped") {
  const auto m = make2("T1", {{"tauL", "0.8"}, {"deltaL", "0.98"}, {"tauR", "0.5"},
                              {"deltaR", "1"}, {"h", "-1"}});
  const auto res = critical_images(m, {Vec2(-2, 0), Vec2(0, 0)}, 1, 1e8, 10.0);
  CHECK(res.segments.size() == 1);  // both children shorter than 10
  CHECK(res.hull_stabilized);      // nothing new appeared
}

TEST_CASE("negative depth is rejected") {
  const auto m = whole_plane(Mat2::Identity());
  CHECK_THROWS_AS(critical_images(m, {Vec2(0, 0), Vec2(1, 0)}, -1), std::invalid_argument);
}
