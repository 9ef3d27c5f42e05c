#pragma once

#include <optional>
#include <span>
#include <string>

#include "hflow/graph_geometry.hpp"

namespace hflow {

enum class Verdict { Certified, Violated, Inconclusive };

std::string to_string(Verdict v);

// Point cloud fed to the ball-condition scan, with the sampling metadata the
// slack band is derived from (distance functions are 1-Lipschitz, so
// slack = 2 h max(1, sup|kappa|)).
struct BallScanInput {
  std::span<const Vec3> points;
  std::span<const Vec3> normals;
  double sample_spacing = 0.0;  // max ambient distance between adjacent samples
  double kappa_sup = 0.0;       // curvature bound of the sampled surface
};

struct BallWitness {
  int center_node = -1;   // p: ball center p +/- a nu(p)
  int hit_node = -1;      // q found strictly inside the ball
  int side = +1;          // +1 or -1
  double distance = 0.0;  // |q - center|
};

struct Certificate {
  double radius_tested = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<BallWitness> witness;  // present iff verdict == Violated
  double slack = 0.0;
  int sample_count = 0;
};

// Uniform ball condition scan: for every sample p and both sides, the open
// ball B(p +/- a nu(p), a) must contain no surface sample.
Certificate ball_condition(const BallScanInput& input, double a,
                           Execution exec = Execution::Parallel);

// Largest radius in (0, upper_bracket] that ball_condition certifies,
// bisected to relative width 1e-3. Inconclusive counts as not certified.
double certified_ball_radius(const BallScanInput& input, double upper_bracket,
                             Execution exec = Execution::Parallel);

struct GraphRadiusEstimate {
  double conservative = 0.0;  // 1 / (2C) from the differenced-Hessian bound (capped)
  double certified = 0.0;     // bisected ball-condition radius of the sampled graph
};

// Graph-radius recipe evaluated on the sampled profile values of a Graph
// reference surface; the Hessian bound is recomputed by finite differences
// of the samples, independent of the analytic build.
GraphRadiusEstimate graph_radius(const ReferenceSurface& graph_surface,
                                 Execution exec = Execution::Parallel);

struct OffsetCertificate {
  Certificate certificate;    // at the returned radius
  double radius = 0.0;        // largest certified radius for Gamma_rho
  double proposal = 0.0;      // min(1/kappa_sup, a - sup|rho|)
  double kappa_sup = 0.0;     // sup principal curvature of Gamma_rho
};

// Certifies a tubular radius for the offset surface Gamma_rho by scanning
// its embedded point cloud.
OffsetCertificate certify_offset_surface(const ReferenceSurface& surface,
                                         const std::vector<double>& rho,
                                         Execution exec = Execution::Parallel);

// Max ambient distance between chart-adjacent samples of a point set laid
// out on the surface grid. `period_offset` is the ambient translation the
// points pick up when a periodic axis wraps (cylinder axial axis, graph box
// axes); without it the wrap pair would measure the full period.
double max_sample_spacing(const ChartGrid& grid, std::span<const Vec3> points,
                          const std::array<Vec3, 2>& period_offset = {Vec3{0, 0, 0},
                                                                      Vec3{0, 0, 0}});

}  // namespace hflow
