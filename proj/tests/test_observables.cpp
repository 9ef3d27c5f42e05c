#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hflow/observables.hpp"

using namespace hflow;

namespace {

ReferenceSurface make(SurfaceKindTag kind, std::array<int, 2> res) {
  SurfaceSpec s;
  s.kind = kind;
  return build_reference(s, res);
}

ReferenceSurface make_torus(double R, double r, int n) {
  SurfaceSpec s;
  s.kind = SurfaceKindTag::Torus;
  s.ring_radius = R;
  s.radius = r;
  return build_reference(s, {n, n});
}

}  // namespace

TEST_CASE("sphere fit recovers synthetic spheres exactly") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec3 c = {0.4, -1.2, 2.0};
  double R = 1.7;
  std::vector<Vec3> pts;
  for (int i = 0; i < 200; ++i) {
    Vec3 d = {u(rng), u(rng), u(rng)};
    double n = norm(d);
    if (n < 1e-3) continue;
    pts.push_back(c + (R / n) * d);
  }
  SphereFit fit = sphere_fit(pts, 3);
  CHECK(norm(fit.center - c) < 1e-10);
  CHECK(fit.radius == doctest::Approx(R).epsilon(1e-12));
  CHECK(fit.residual < 1e-10);
}

TEST_CASE("planar circle fit works in two dimensions") {
  std::vector<Vec3> pts;
  for (int k = 0; k < 40; ++k) {
    double phi = 2.0 * M_PI * k / 40.0;
    pts.push_back({1.0 + 0.5 * std::cos(phi), -2.0 + 0.5 * std::sin(phi), 0.0});
  }
  SphereFit fit = sphere_fit(pts, 2);
  CHECK(fit.center[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.center[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.radius == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degenerate point sets are rejected") {
  std::vector<Vec3> colinear;
  for (int i = 0; i < 20; ++i) colinear.push_back({static_cast<double>(i), 0.0, 0.0});
  CHECK_THROWS_AS(sphere_fit(colinear, 3), ConstructionError);
  std::vector<Vec3> few = {{0, 0, 0}, {1, 0, 0}};
  CHECK_THROWS_AS(sphere_fit(few, 3), ConstructionError);
}

TEST_CASE("area, volume and energy match closed forms on round surfaces") {
  // Unit sphere with constant offsets.
  ReferenceSurface sp = make(SurfaceKindTag::Sphere, {48, 96});
  for (double c : {0.0, 0.2}) {
    GraphGeometry geo = build_graph_geometry(sp, std::vector<double>(sp.size(), c));
    double r = 1.0 + c;
    CHECK(surface_area(geo) == doctest::Approx(4.0 * M_PI * r * r).epsilon(1e-3));
    CHECK(enclosed_volume(geo) ==
          doctest::Approx(4.0 / 3.0 * M_PI * r * r * r).epsilon(1e-3));
    CHECK(willmore_energy(geo) == doctest::Approx(4.0 * M_PI).epsilon(1e-3));
  }
  // Torus R=2, r=1: area 4 pi^2 R r, volume 2 pi^2 R r^2, energy 4 pi^2 / sqrt(3).
  ReferenceSurface to = make_torus(2.0, 1.0, 96);
  GraphGeometry geo = build_graph_geometry(to, std::vector<double>(to.size(), 0.0));
  CHECK(surface_area(geo) == doctest::Approx(4.0 * M_PI * M_PI * 2.0).epsilon(1e-3));
  CHECK(enclosed_volume(geo) == doctest::Approx(2.0 * M_PI * M_PI * 2.0).epsilon(1e-3));
  CHECK(willmore_energy(geo) ==
        doctest::Approx(4.0 * M_PI * M_PI / std::sqrt(3.0)).epsilon(1e-3));
}

TEST_CASE("circle observables use arc length and plane area") {
  SurfaceSpec spec;
  spec.kind = SurfaceKindTag::Circle;
  ReferenceSurface s = build_reference(spec, {256, 1});
  GraphGeometry geo = build_graph_geometry(s, std::vector<double>(s.size(), 0.1));
  CHECK(surface_area(geo) == doctest::Approx(2.0 * M_PI * 1.1).epsilon(1e-4));
  CHECK(enclosed_volume(geo) == doctest::Approx(M_PI * 1.1 * 1.1).epsilon(1e-4));
}

TEST_CASE("cylinder volume covers one axial period") {
  ReferenceSurface s = make(SurfaceKindTag::Cylinder, {32, 48});
  GraphGeometry geo = build_graph_geometry(s, std::vector<double>(s.size(), 0.0));
  CHECK(enclosed_volume(geo) == doctest::Approx(M_PI * 2.0 * M_PI).epsilon(1e-3));
  SphereFit fit = cylinder_cross_section_fit(geo);
  CHECK(fit.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  GraphGeometry off = build_graph_geometry(s, std::vector<double>(s.size(), 0.25));
  CHECK(cylinder_cross_section_fit(off).radius == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("volume is refused for open surfaces") {
  SurfaceSpec spec;
  spec.kind = SurfaceKindTag::Graph;
  spec.graph_dim = 2;
  ReferenceSurface s = build_reference(spec, {16, 16});
  GraphGeometry geo = build_graph_geometry(s, std::vector<double>(s.size(), 0.0));
  CHECK_THROWS_AS(enclosed_volume(geo), ConstructionError);
  ObservableRecord rec = measure(geo, 0.0);
  CHECK(std::isnan(rec.volume));
  CHECK(rec.area == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-12));
}

TEST_CASE("measure is deterministic and consistent with the parts") {
  ReferenceSurface s = make_torus(2.0, 1.0, 32);
  std::vector<double> rho(s.size());
  for (int i0 = 0; i0 < 32; ++i0)
    for (int i1 = 0; i1 < 32; ++i1)
      rho[s.grid.flat(i0, i1)] =
          0.05 * std::sin(s.grid.coord(0, i0)) * std::cos(s.grid.coord(1, i1));
  GraphGeometry geo = build_graph_geometry(s, rho);
  ObservableRecord r1 = measure(geo, 1.5);
  ObservableRecord r2 = measure(geo, 1.5);
  CHECK(r1.area == r2.area);
  CHECK(r1.volume == r2.volume);
  CHECK(r1.holder_seminorm == r2.holder_seminorm);
  CHECK(r1.t == 1.5);
  CHECK(r1.area == surface_area(geo));
  CHECK(r1.willmore_energy == willmore_energy(geo));
  CHECK(r1.sup_rho == doctest::Approx(0.05).epsilon(5e-2));
  CHECK(r1.sup_grad_rho > 0.0);
  CHECK(r1.holder_seminorm > 0.0);
}

TEST_CASE("hoelder seminorm vanishes exactly for constant heights") {
  ReferenceSurface s = make(SurfaceKindTag::Sphere, {16, 32});
  GraphGeometry geo = build_graph_geometry(s, std::vector<double>(s.size(), 0.3));
  ObservableRecord rec = measure(geo, 0.0);
  CHECK(rec.holder_seminorm == 0.0);
  CHECK(rec.sup_grad_rho == 0.0);
}

TEST_CASE("decay fit recovers exponential rates") {
  std::vector<double> t, v, c;
  for (int i = 0; i < 50; ++i) {
    t.push_back(0.1 * i);
    v.push_back(3.0 * std::exp(-2.0 * 0.1 * i));
    c.push_back(0.7);
  }
  DecayFit f = decay_fit(t, v);
  CHECK(f.rate == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-10));
  DecayFit fc = decay_fit(t, c);
  CHECK(fc.rate == doctest::Approx(0.0));
  CHECK(fc.r_squared == doctest::Approx(1.0));
  std::vector<double> short_t(t.begin(), t.begin() + 5), short_v(v.begin(), v.begin() + 5);
  CHECK_THROWS_AS(decay_fit(short_t, short_v), ConstructionError);
  std::vector<double> bad = v;
  bad[10] = -1.0;
  CHECK_THROWS_AS(decay_fit(t, bad), ConstructionError);
}
