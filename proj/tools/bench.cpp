// Timing comparison of the serial reference path against the OpenMP path
// for the main kernels: geometry build, Laplace-Beltrami application, and
// the ball-condition scan.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "hflow/certifier.hpp"
#include "hflow/flow.hpp"

using namespace hflow;

namespace {

template <class Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.4f ms %10.4f ms   speedup %.2fx\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel);
}

}  // namespace

int main() {
  SurfaceSpec spec;
  spec.kind = SurfaceKindTag::Torus;
  ReferenceSurface surface = build_reference(spec, {192, 192});
  std::printf("torus grid %d x %d, %d threads available\n", 192, 192, thread_cap());

  std::vector<double> rho(surface.size());
  int n1 = surface.grid.axis[1].n;
  for (int idx = 0; idx < surface.size(); ++idx) {
    double u = surface.grid.coord(0, idx / n1), v = surface.grid.coord(1, idx % n1);
    rho[idx] = 0.1 * std::cos(2 * u) * std::sin(3 * v);
  }

  double s_build = time_best_of(3, [&] { build_graph_geometry(surface, rho, Execution::Serial); });
  double p_build = time_best_of(3, [&] { build_graph_geometry(surface, rho, Execution::Parallel); });
  row("graph geometry build", s_build, p_build);

  GraphGeometry geo = build_graph_geometry(surface, rho);
  double s_lap = time_best_of(5, [&] { laplace_beltrami(geo, geo.mean_curv, Execution::Serial); });
  double p_lap = time_best_of(5, [&] { laplace_beltrami(geo, geo.mean_curv, Execution::Parallel); });
  row("laplace-beltrami", s_lap, p_lap);

  ReferenceSurface small = build_reference(spec, {64, 64});
  BallScanInput in{small.pos, small.nu, max_sample_spacing(small.grid, small.pos),
                   weingarten_sup(small).sup_abs_kappa};
  double s_ball = time_best_of(3, [&] { ball_condition(in, 1.0, Execution::Serial); });
  double p_ball = time_best_of(3, [&] { ball_condition(in, 1.0, Execution::Parallel); });
  row("ball-condition scan (64x64)", s_ball, p_ball);

  // The parallel path must be bitwise identical to the serial reference.
  GraphGeometry gs = build_graph_geometry(surface, rho, Execution::Serial);
  GraphGeometry gp = build_graph_geometry(surface, rho, Execution::Parallel);
  bool same = true;
  for (int i = 0; i < surface.size(); ++i)
    same = same && gs.mean_curv[i] == gp.mean_curv[i] && gs.detg_rho[i] == gp.detg_rho[i];
  std::printf("serial/parallel bitwise identical: %s\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
