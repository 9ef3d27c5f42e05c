#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "hflow/grid.hpp"
#include "hflow/modes.hpp"
#include "hflow/parallel.hpp"
#include "hflow/small_math.hpp"

namespace hflow {

enum class SurfaceKindTag { Circle, Sphere, Cylinder, Torus, Graph };

std::string to_string(SurfaceKindTag k);

struct SurfaceSpec {
  SurfaceKindTag kind = SurfaceKindTag::Sphere;
  double radius = 1.0;        // circle/sphere/cylinder radius, torus tube radius
  double ring_radius = 2.0;   // torus: distance from axis to tube center
  double length = 2.0 * M_PI; // cylinder axial period
  // Graph kind: f given as a closed-form trig mode sum over a periodic box.
  ModeSum graph_profile;
  int graph_dim = 1;                               // 1 or 2
  std::array<double, 2> box = {2.0 * M_PI, 2.0 * M_PI};
  double graph_radius_cap = 100.0;                 // tubular radius cap for flat graphs
};

// Discretized reference hypersurface with closed-form geometry at every node.
// Immutable once built; safe to share across threads.
struct ReferenceSurface {
  SurfaceSpec spec;
  ChartGrid grid;
  int m = 2;            // hypersurface dimension (ambient is m+1)
  bool closed = false;  // encloses a volume (cylinder: per axial period)
  double tubular_radius = 0.0;

  std::vector<Vec3> pos;                    // node position in R^{m+1} (z = 0 for m = 1)
  std::vector<Vec3> nu;                     // unit normal
  std::vector<std::array<Vec3, 2>> tau;     // coordinate tangent vectors
  std::vector<Mat2> g, ginv;                // metric and inverse
  std::vector<double> detg;
  std::vector<Mat2> l_lo;                   // second fundamental form l_ij
  std::vector<Mat2> l_mix;                  // Weingarten l^i_j
  std::vector<Ten3> christoffel;            // [k][i][j]
  std::vector<Ten3> dl_mix;                 // [i][k][j] = d_i l^k_j (analytic)
  std::vector<std::array<double, 2>> kappa; // principal curvatures

  // Ambient translation picked up by `pos` when a periodic chart axis wraps
  // (cylinder axial axis, graph box axes); zero for compact directions.
  std::array<Vec3, 2> period_offset = {Vec3{0, 0, 0}, Vec3{0, 0, 0}};

  int size() const { return grid.size(); }
};

// resolution: per-axis node counts (second entry ignored for 1d charts).
ReferenceSurface build_reference(const SurfaceSpec& spec, std::array<int, 2> resolution,
                                 Execution exec = Execution::Parallel);

struct ConsistencyReport {
  // Max discrepancy between analytic fields and centered-difference
  // recomputation, normalized by (1 + |analytic value|).
  double metric = 0.0;
  double second_form = 0.0;
  double christoffel = 0.0;
  double normal_unit = 0.0;     // max | |nu| - 1 |
  double inverse_identity = 0.0;
  double max() const;
};

ConsistencyReport geometry_consistency_check(const ReferenceSurface& surface);

struct WeingartenBound {
  double sup_abs_kappa = 0.0;
  // 1 / sup, or +inf for flat surfaces ("unbounded").
  double implied_radius_bound = std::numeric_limits<double>::infinity();
};

WeingartenBound weingarten_sup(const ReferenceSurface& surface);

}  // namespace hflow
