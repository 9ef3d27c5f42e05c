#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hflow/grid.hpp"

using namespace hflow;

TEST_CASE("periodic axis wraps by index") {
  ChartGrid g(1, Axis{16, 0.5, 0.0, AxisKind::Periodic});
  CHECK(g.resolve(16, 0).index == g.flat(0, 0));
  CHECK(g.resolve(-1, 0).index == g.flat(15, 0));
  CHECK(g.resolve(-1, 0).sign == 1.0);
  CHECK(g.resolve(33, 0).index == g.flat(1, 0));
}

TEST_CASE("pole axis reflects the index and shifts the periodic axis") {
  // Cell-centered latitude rows: crossing the pole lands on the reflected
  // row at the antipodal longitude.
  ChartGrid g(2, Axis{8, 0.1, 0.05, AxisKind::Pole}, Axis{12, 0.2, 0.0, AxisKind::Periodic});
  GhostRef below = g.resolve(-1, 3);
  CHECK(below.index == g.flat(0, 9));  // reflected row 0, phi + half period
  CHECK(below.sign == 1.0);
  GhostRef above = g.resolve(8, 1);
  CHECK(above.index == g.flat(7, 7));

  SUBCASE("odd-parity components flip sign across the pole") {
    CHECK(g.resolve(-1, 3, PoleParity::Odd).sign == -1.0);
    CHECK(g.resolve(-2, 3, PoleParity::Odd).sign == -1.0);
    CHECK(g.resolve(3, 3, PoleParity::Odd).sign == 1.0);
  }
}

TEST_CASE("centered differences are exact on the matching polynomials") {
  int n = 32;
  double h = 0.25;
  ChartGrid g(1, Axis{n, h, 0.0, AxisKind::Periodic});
  // A quadratic is not periodic; test away from the seam.
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) {
    double x = g.coord(0, i);
    u[i] = 3.0 + 2.0 * x + 0.5 * x * x;
  }
  for (int i = 2; i < n - 2; ++i) {
    double x = g.coord(0, i);
    CHECK(g.d1(u, i, 0, 0) == doctest::Approx(2.0 + x).epsilon(1e-12));
    CHECK(g.d2(u, i, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mixed difference matches the separable product rule") {
  int n = 16;
  ChartGrid g(2, Axis{n, 2.0 * M_PI / n, 0.0, AxisKind::Periodic},
              Axis{n, 2.0 * M_PI / n, 0.0, AxisKind::Periodic});
  std::vector<double> u(g.size());
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      u[g.flat(i0, i1)] = std::sin(g.coord(0, i0)) * std::sin(g.coord(1, i1));
  // d11 of sin(x)sin(y) = cos(x)cos(y) to second order.
  double err = 0.0;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1) {
      double exact = std::cos(g.coord(0, i0)) * std::cos(g.coord(1, i1));
      err = std::max(err, std::abs(g.d11(u, i0, i1) - exact));
    }
  CHECK(err < 0.06);  // O(h^2) at h = 2 pi / 16
}

TEST_CASE("grid construction rejects invalid axes") {
  CHECK_THROWS_AS(ChartGrid(1, Axis{4, 0.5, 0.0, AxisKind::Periodic}), ConstructionError);
  CHECK_THROWS_AS(ChartGrid(1, Axis{16, 0.0, 0.0, AxisKind::Periodic}), ConstructionError);
  // Pole axis must be axis 0 with an even periodic partner.
  CHECK_THROWS_AS(ChartGrid(2, Axis{8, 0.1, 0.0, AxisKind::Periodic},
                            Axis{8, 0.1, 0.0, AxisKind::Pole}),
                  ConstructionError);
  CHECK_THROWS_AS(ChartGrid(2, Axis{8, 0.1, 0.0, AxisKind::Pole},
                            Axis{9, 0.1, 0.0, AxisKind::Periodic}),
                  ConstructionError);
}
