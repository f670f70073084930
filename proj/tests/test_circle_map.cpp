#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pwl/catalog.hpp"
#include "pwl/circle_map.hpp"

using namespace pwl;

namespace {

CircleMap1D two_slope(Scalar sL, Scalar sR, Scalar h) {
  CircleMap1D f;
  f.slopes = {sL, sR};
  f.breakpoints = {h};
  return f;
}

}  // namespace

TEST_CASE("to_circle_map reads slopes and breakpoints off a 1D catalog map") {
  const auto m = std::get<PwlMap1>(make_catalog_map("F", {{"sL", "2"}, {"sR", "0.5"}}));
  const CircleMap1D f = to_circle_map(m);
  REQUIRE(f.two_branch());
  CHECK(f.sL() == 2.0);
  CHECK(f.sR() == 0.5);
  CHECK(f.h() == 1.0);
  CHECK(cm_branch(f, 0.999) == 0);
  CHECK(cm_branch(f, 1.0) == 1);  // breakpoint joins the right branch
  CHECK(cm_eval(f, 0.5) == doctest::Approx(1.0));
  CHECK(cm_eval(f, 1.0) == doctest::Approx(0.5));
  CHECK(cm_eval(f, 1.5) == doctest::Approx(0.75));
}

TEST_CASE("to_circle_map wants halfspace partitions") {
  Region<1> all{{}, "all"};
  Region<1> rest{{HalfSpace<1>{Vec<1>(Vec<1>::Constant(1.0)), 1.0, false}}, "R"};
  Mat<1> s;
  s << 1.0;
  const PwlMap<1> bad({all, rest}, {LinearPiece<1>{s}, LinearPiece<1>{s}});
  CHECK_THROWS_AS(to_circle_map(bad), std::invalid_argument);
}

TEST_CASE("homeomorphism condition in both breakpoint signs") {
  CHECK(cm_is_homeomorphism(two_slope(2.0, 0.5, 1.0)));
  CHECK(cm_is_homeomorphism(two_slope(0.8, 1.1, -1.0)));  // mirrored ordering
  CHECK(!cm_is_homeomorphism(two_slope(0.5, 0.8, 1.0)));  // both contract
  CHECK(!cm_is_homeomorphism(two_slope(2.0, 1.5, 1.0)));  // both expand
  CHECK(!cm_is_homeomorphism(two_slope(2.0, -0.5, 1.0)));  // orientation flip
  CHECK(!cm_is_homeomorphism(two_slope(2.0, 0.5, -1.0)));  // ordering wrong for h < 0
  CircleMap1D three = two_slope(2.0, 0.5, 1.0);
  three.slopes.push_back(0.5);
  three.breakpoints.push_back(2.0);
  CHECK(!cm_is_homeomorphism(three));
}

TEST_CASE("invariant interval") {
  const auto iv = invariant_interval(two_slope(2.0, 0.5, 1.0));
  CHECK(iv.first == doctest::Approx(0.5));
  CHECK(iv.second == doctest::Approx(2.0));
  const auto mirrored = invariant_interval(two_slope(0.8, 1.1, -1.0));
  CHECK(mirrored.first == doctest::Approx(-1.1));
  CHECK(mirrored.second == doctest::Approx(-0.8));
  CHECK_THROWS_AS(invariant_interval(two_slope(0.5, 0.8, 1.0)), std::domain_error);
  CircleMap1D with_domain = two_slope(2.0, 1.5, 1.0);
  CHECK_THROWS_AS(invariant_interval(with_domain), std::domain_error);
  with_domain.domain = {{1.0, 3.0}};
  CHECK(invariant_interval(with_domain).second == doctest::Approx(3.0));
}

TEST_CASE("rationality certificates") {
  auto c = rationality_test(2.0, 0.5);
  REQUIRE(c.has_value());
  CHECK(c->first == 1);
  CHECK(c->second == 1);
  c = rationality_test(4.0, 0.5);
  REQUIRE(c.has_value());
  CHECK(c->first == 1);
  CHECK(c->second == 2);  // 4 * 0.5^2 = 1
  CHECK(!rationality_test(0.8, 1.1).has_value());    // best residual ~6.5e-6 relative
  CHECK(!rationality_test(0.9, 3.681).has_value());
  CHECK_THROWS_AS(rationality_test(-1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(rationality_test(2.0, 0.5, 0), std::invalid_argument);
}

TEST_CASE("rotation number: rational case reports the certificate value") {
  const auto r = rotation_number(two_slope(2.0, 0.5, 1.0));
  CHECK(r.method == RotationResult::Method::ClosedForm);
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->first == 1);
  CHECK(r.certificate->second == 1);
  CHECK(r.rho == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.rho_orbit == doctest::Approx(0.5).epsilon(1e-12));  // period-2 orbit, exact frequency
}

TEST_CASE("rotation number: irrational log ratio uses the drift balance") {
  const auto r = rotation_number(two_slope(0.8, 1.1, -1.0));
  CHECK(!r.certificate.has_value());
  CHECK(r.rho == doctest::Approx(0.29929051064830714).epsilon(1e-14));
  CHECK(std::abs(r.rho_orbit - r.rho) < 1e-3);

  const auto steep = rotation_number(two_slope(0.9, 3.681, -1.0));
  CHECK(steep.rho ==
        doctest::Approx(std::log(3.681) / (std::log(3.681) - std::log(0.9))).epsilon(1e-15));
  CHECK(steep.rho == doctest::Approx(0.92519904021684596).epsilon(1e-14));
  CHECK(std::abs(steep.rho_orbit - steep.rho) < 1e-3);
}

TEST_CASE("rotation number: no structural route and no domain throws") {
  CHECK_THROWS_AS(rotation_number(two_slope(2.0, 1.5, 1.0)), std::domain_error);
}

TEST_CASE("cm_classify: canonical verdicts") {
  const CmVerdict filled = cm_classify(two_slope(2.0, 0.5, 1.0));
  CHECK(filled.kind == CmVerdict::Kind::PeriodicFilled);
  CHECK(filled.period == 2);
  CHECK(filled.rho == doctest::Approx(0.5));
  CHECK(std::string(to_string(filled.kind)) == "PERIODIC_FILLED");

  const CmVerdict quasi = cm_classify(two_slope(0.8, 1.1, -1.0));
  CHECK(quasi.kind == CmVerdict::Kind::Quasiperiodic);
  CHECK(quasi.rho == doctest::Approx(0.29929051064830714).epsilon(1e-12));
  CHECK(!quasi.certificate.has_value());

  CHECK(cm_classify(two_slope(0.5, 0.8, 1.0)).kind == CmVerdict::Kind::FixedPointO);
  CHECK(cm_classify(two_slope(2.0, 1.5, 1.0)).kind == CmVerdict::Kind::Divergent);
}

TEST_CASE("cm_classify: multi-branch orbit probe") {
  // three branches that reproduce the period-2 dynamics of (2, 0.5, h=1)
  CircleMap1D f;
  f.slopes = {2.0, 2.0, 0.5};
  f.breakpoints = {0.75, 1.0};
  f.domain = {{0.5, 2.0}};
  const CmVerdict v = cm_classify(f);
  CHECK(v.kind == CmVerdict::Kind::PeriodicFilled);
  CHECK(v.period == 2);
  CHECK(v.rho == doctest::Approx(0.5).epsilon(1e-3));

  CircleMap1D esc;
  esc.slopes = {2.0, 2.0, 2.0};
  esc.breakpoints = {0.75, 1.0};
  esc.domain = {{0.5, 2.0}};
  CHECK(cm_classify(esc).kind == CmVerdict::Kind::Divergent);

  CircleMap1D sink;
  sink.slopes = {0.4, 0.4, 2.0};
  sink.breakpoints = {0.75, 1.0};
  sink.domain = {{0.1, 0.5}};
  CHECK(cm_classify(sink).kind == CmVerdict::Kind::FixedPointO);
}

TEST_CASE("cm_lyapunov vanishes for circle-map dynamics") {
  CHECK(std::abs(cm_lyapunov(two_slope(2.0, 0.5, 1.0), 1.25, 1000)) < 1e-12);
  const CircleMap1D f = two_slope(0.8, 1.1, -1.0);
  CHECK(std::abs(cm_lyapunov(f, -0.95, 200000)) < 1e-3);
  CHECK_THROWS_AS(cm_lyapunov(f, -0.95, 0), std::invalid_argument);
  const CircleMap1D flat = two_slope(0.0, 2.0, 1.0);
  CHECK(cm_lyapunov(flat, 0.5, 10) == -std::numeric_limits<double>::infinity());
}
