#pragma once

#include <span>

#include "hflow/graph_geometry.hpp"

namespace hflow {

struct SphereFit {
  Vec3 center = {0.0, 0.0, 0.0};
  double radius = 0.0;
  double residual = 0.0;  // RMS of |dist(point, center) - radius|
};

// Least-squares algebraic sphere fit (linearized |x - c|^2 = R^2 system).
// dim = 2 fits a circle in the xy-plane (center z = 0). Requires at least
// dim + 2 points; throws ConstructionError on degenerate point sets.
SphereFit sphere_fit(std::span<const Vec3> points, int dim = 3);

// Mean cross-section circle radius of a cylinder graph: one circle fit in the
// (y, z) plane per axial ring, averaged; residual is the max over rings.
SphereFit cylinder_cross_section_fit(const GraphGeometry& geom);

struct ObservableRecord {
  double t = 0.0;
  double area = 0.0;
  double volume = 0.0;           // NaN on non-closed references
  double willmore_energy = 0.0;  // integral of H^2 over the surface
  double sup_rho = 0.0;
  double sup_grad_rho = 0.0;     // sup of |grad rho| in the reference metric
  double holder_seminorm = 0.0;  // discrete C^alpha seminorm of grad rho
  SphereFit fit;                 // kind-appropriate fit of the embedded cloud
};

// All functionals of one geometry snapshot. Deterministic summation order so
// repeated runs are bit-identical. alpha is the Hoelder exponent of the
// discrete seminorm.
ObservableRecord measure(const GraphGeometry& geom, double t, double alpha = 0.5);

// Divergence-theorem enclosed volume; throws ConstructionError when the
// reference surface is not closed.
double enclosed_volume(const GraphGeometry& geom);

double surface_area(const GraphGeometry& geom);
double willmore_energy(const GraphGeometry& geom);

struct DecayFit {
  double rate = 0.0;       // positive = decay
  double r_squared = 0.0;  // goodness of the log-linear fit
};

// Least-squares slope of log(value) against t. Requires >= 10 samples and
// strictly positive values (ConstructionError otherwise).
DecayFit decay_fit(std::span<const double> t, std::span<const double> value);

}  // namespace hflow
