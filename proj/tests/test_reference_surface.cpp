#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hflow/reference_surface.hpp"

using namespace hflow;

namespace {

SurfaceSpec sphere_spec(double r) {
  SurfaceSpec s;
  s.kind = SurfaceKindTag::Sphere;
  s.radius = r;
  return s;
}

SurfaceSpec torus_spec(double ring, double tube) {
  SurfaceSpec s;
  s.kind = SurfaceKindTag::Torus;
  s.ring_radius = ring;
  s.radius = tube;
  return s;
}

}  // namespace

TEST_CASE("sphere nodes carry the closed-form round geometry") {
  double r = 2.0;
  ReferenceSurface s = build_reference(sphere_spec(r), {16, 32});
  CHECK(s.m == 2);
  CHECK(s.closed);
  CHECK(s.tubular_radius == doctest::Approx(r));
  for (int idx = 0; idx < s.size(); ++idx) {
    CHECK(norm(s.pos[idx]) == doctest::Approx(r).epsilon(1e-14));
    // Outward normal: nu = pos / r.
    CHECK(norm(s.nu[idx] - (1.0 / r) * s.pos[idx]) < 1e-13);
    CHECK(s.kappa[idx][0] == doctest::Approx(-1.0 / r).epsilon(1e-13));
    CHECK(s.kappa[idx][1] == doctest::Approx(-1.0 / r).epsilon(1e-13));
    // Weingarten map is -1/r times the identity.
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(s.l_mix[idx][i][j] == doctest::Approx((i == j ? -1.0 / r : 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("normals are orthogonal to tangents and metric inverses are exact") {
  for (SurfaceKindTag kind :
       {SurfaceKindTag::Circle, SurfaceKindTag::Sphere, SurfaceKindTag::Cylinder,
        SurfaceKindTag::Torus}) {
    SurfaceSpec spec;
    spec.kind = kind;
    ReferenceSurface s = build_reference(spec, {24, 24});
    for (int idx = 0; idx < s.size(); ++idx) {
      for (int i = 0; i < s.m; ++i) CHECK(std::abs(dot(s.nu[idx], s.tau[idx][i])) < 1e-13);
      Mat2 id = mul_m(s.m, s.ginv[idx], s.g[idx]);
      for (int i = 0; i < s.m; ++i)
        for (int j = 0; j < s.m; ++j)
          CHECK(id[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      CHECK(s.detg[idx] == doctest::Approx(det_m(s.m, s.g[idx])).epsilon(1e-12));
    }
  }
}

TEST_CASE("cylinder principal curvatures are -1/r along the circle and 0 axially") {
  SurfaceSpec spec;
  spec.kind = SurfaceKindTag::Cylinder;
  spec.radius = 1.5;
  spec.length = 3.0;
  ReferenceSurface s = build_reference(spec, {16, 24});
  for (int idx = 0; idx < s.size(); ++idx) {
    double lo = std::min(s.kappa[idx][0], s.kappa[idx][1]);
    double hi = std::max(s.kappa[idx][0], s.kappa[idx][1]);
    CHECK(lo == doctest::Approx(-1.0 / 1.5).epsilon(1e-13));
    CHECK(hi == doctest::Approx(0.0));
    // Cross-section stays on the circle of radius r.
    CHECK(std::hypot(s.pos[idx][1], s.pos[idx][2]) == doctest::Approx(1.5).epsilon(1e-13));
  }
  WeingartenBound wb = weingarten_sup(s);
  CHECK(wb.sup_abs_kappa == doctest::Approx(1.0 / 1.5).epsilon(1e-13));
  CHECK(wb.implied_radius_bound == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(s.tubular_radius == doctest::Approx(1.5));
  // Wrapping the axial axis translates positions by one period.
  CHECK(s.period_offset[0][0] == doctest::Approx(3.0));
}

TEST_CASE("torus curvatures follow the tube angle") {
  double R = 2.0, r = 0.75;
  ReferenceSurface s = build_reference(torus_spec(R, r), {32, 32});
  for (int i0 = 0; i0 < 32; ++i0) {
    double theta = s.grid.coord(0, i0);
    for (int i1 = 0; i1 < 32; ++i1) {
      int idx = s.grid.flat(i0, i1);
      double w = R + r * std::cos(theta);
      CHECK(s.kappa[idx][0] == doctest::Approx(-1.0 / r).epsilon(1e-13));
      CHECK(s.kappa[idx][1] == doctest::Approx(-std::cos(theta) / w).epsilon(1e-12));
    }
  }
  CHECK(s.tubular_radius == doctest::Approx(r));
  WeingartenBound wb = weingarten_sup(s);
  CHECK(wb.sup_abs_kappa == doctest::Approx(1.0 / r).epsilon(1e-12));
}

TEST_CASE("difference-vs-analytic consistency shrinks at second order") {
  // Torus: refine 32^2 -> 64^2 and expect the max discrepancy to drop 4x.
  ConsistencyReport coarse =
      geometry_consistency_check(build_reference(torus_spec(2.0, 1.0), {32, 32}));
  ConsistencyReport fine =
      geometry_consistency_check(build_reference(torus_spec(2.0, 1.0), {64, 64}));
  CHECK(coarse.normal_unit < 1e-13);
  CHECK(fine.normal_unit < 1e-13);
  CHECK(coarse.inverse_identity < 1e-12);
  double ratio = coarse.max() / fine.max();
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("circle consistency at 256 nodes sits on the centered-difference floor") {
  SurfaceSpec spec;
  spec.kind = SurfaceKindTag::Circle;
  spec.radius = 1.0;
  ConsistencyReport at128 = geometry_consistency_check(build_reference(spec, {128, 1}));
  ConsistencyReport at256 = geometry_consistency_check(build_reference(spec, {256, 1}));
  // h^2/3 truncation of the centered stencils on trig data: ~2e-4 at 256.
  CHECK(at256.max() < 5e-4);
  double ratio = at128.max() / at256.max();
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("sphere consistency check respects the polar chart") {
  ConsistencyReport rep = geometry_consistency_check(build_reference(sphere_spec(1.0), {32, 64}));
  CHECK(rep.max() < 2e-2);
  ConsistencyReport fine = geometry_consistency_check(build_reference(sphere_spec(1.0), {64, 128}));
  CHECK(fine.max() < rep.max() / 3.0);
}

TEST_CASE("flat graph has vanishing curvature and unbounded radius estimate") {
  SurfaceSpec spec;
  spec.kind = SurfaceKindTag::Graph;
  spec.graph_dim = 2;
  spec.graph_radius_cap = 7.0;
  ReferenceSurface s = build_reference(spec, {16, 16});
  CHECK_FALSE(s.closed);
  for (int idx = 0; idx < s.size(); ++idx) {
    CHECK(s.kappa[idx][0] == 0.0);
    CHECK(s.kappa[idx][1] == 0.0);
    CHECK(s.nu[idx][2] == doctest::Approx(1.0));
  }
  CHECK(std::isinf(weingarten_sup(s).implied_radius_bound));
  CHECK(s.tubular_radius == doctest::Approx(7.0));
  CHECK(geometry_consistency_check(s).max() < 1e-12);
}

TEST_CASE("one-dimensional sine graph matches hand-computed geometry") {
  SurfaceSpec spec;
  spec.kind = SurfaceKindTag::Graph;
  spec.graph_dim = 1;
  spec.graph_profile.modes.push_back(parse_mode("0.3 * sin(1*x)"));
  ReferenceSurface s = build_reference(spec, {64, 1});
  for (int idx = 0; idx < s.size(); ++idx) {
    double x = s.grid.coord(0, idx);
    double fp = 0.3 * std::cos(x);
    CHECK(s.pos[idx][1] == doctest::Approx(0.3 * std::sin(x)).epsilon(1e-14));
    CHECK(s.g[idx][0][0] == doctest::Approx(1.0 + fp * fp).epsilon(1e-13));
    // kappa = f'' / (1 + f'^2)^{3/2} with upward normal.
    double kap = -0.3 * std::sin(x) / std::pow(1.0 + fp * fp, 1.5);
    CHECK(s.kappa[idx][0] == doctest::Approx(kap).epsilon(1e-12));
  }
  CHECK(geometry_consistency_check(s).max() < 2e-3);
}

TEST_CASE("construction rejects bad parameters") {
  SurfaceSpec bad = torus_spec(1.0, 1.5);  // tube thicker than the ring gap
  CHECK_THROWS_AS(build_reference(bad, {32, 32}), ConstructionError);
  SurfaceSpec neg = sphere_spec(-1.0);
  CHECK_THROWS_AS(build_reference(neg, {16, 32}), ConstructionError);
}
