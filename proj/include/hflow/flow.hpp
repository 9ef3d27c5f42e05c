#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "hflow/operators.hpp"

namespace hflow {

enum class FlowKind { SDF, Willmore };
enum class SchemeKind { RK4, IMEX };
enum class TerminationReason { Completed, Guard, Stationary, SolverFailure };

std::string to_string(FlowKind f);
std::string to_string(SchemeKind s);
std::string to_string(TerminationReason r);

struct FlowConfig {
  FlowKind flow = FlowKind::SDF;
  SchemeKind scheme = SchemeKind::IMEX;
  double dt = 1e-4;
  double t_end = 1.0;
  double guard_fraction = 0.8;   // terminate when sup|rho| >= guard_fraction * a
  // Relative residual for the implicit solve. The attainable floor is the
  // LU round-off floor cond(I + dt A) * eps, which reaches ~1e-10 on fine
  // sphere grids; 1e-8 stays well below the O(h^2) discretization error.
  double solver_tol = 1e-8;
  int solver_max_iter = 200;
  int snapshot_every = 50;       // steps between snapshot callbacks
  Execution exec = Execution::Parallel;

  void validate() const;
};

struct StepReport {
  double max_dt_rho = 0.0;       // max |rho^{n+1} - rho^n| / dt
  int solver_iterations = 0;
  double solver_residual = 0.0;
  double guard_margin = 0.0;     // guard_fraction * a - sup|rho|
};

struct FlowState {
  double t = 0.0;
  HeightField rho;
  StepReport last_report;
  long step_count = 0;
};

// Flow right-hand sides evaluated via the graph geometry.
std::vector<double> sdf_rhs(const GraphGeometry& geom, Execution exec = Execution::Parallel);
std::vector<double> willmore_rhs(const GraphGeometry& geom, Execution exec = Execution::Parallel);
std::vector<double> flow_rhs(FlowKind flow, const GraphGeometry& geom,
                             Execution exec = Execution::Parallel);

// Explicit part of the quasilinear splitting: remainder = A(rho) rho + rhs,
// so that rhs = -A(rho) rho + remainder holds identically.
std::vector<double> splitting_remainder(const PrincipalOperatorBuilder& builder,
                                        const GraphGeometry& geom, FlowKind flow,
                                        Execution exec = Execution::Parallel);

struct EllipticityRange {
  double r_min = 0.0;
  double r_max = 0.0;
};

// Min/max of the principal symbol |xi|^4_{g*(rho)} over all nodes and a
// deterministic covector sample normalized to |xi|_{g*} = 1.
EllipticityRange ellipticity_check(const ReferenceSurface& surface,
                                   const std::vector<double>& rho,
                                   int directions_per_node = 16);

struct RunResult {
  TerminationReason reason = TerminationReason::Completed;
  FlowState state;
  long steps = 0;
  double guard_margin_min = 0.0;
  // sup|rho| one step before termination (guard trip diagnostics).
  double sup_rho_before_last = 0.0;
};

using SnapshotFn = std::function<void(const FlowState&, const GraphGeometry&)>;

class FlowEngine {
 public:
  FlowEngine(const ReferenceSurface& surface, FlowConfig config);

  // One time step; throws on admissibility loss, returns false on solver
  // failure (state untouched in that case).
  bool step(FlowState& state);

  RunResult run(const HeightField& initial, const SnapshotFn& on_snapshot = nullptr);

  const FlowConfig& config() const { return config_; }
  double stationary_tolerance() const;

 private:
  bool imex_step(FlowState& state);
  void rk4_step(FlowState& state);

  const ReferenceSurface* surface_;
  FlowConfig config_;
  PrincipalOperatorBuilder builder_;

  // Frozen-LU iterative refinement state for the implicit solve.
  struct SolverCache;
  std::shared_ptr<SolverCache> cache_;
};

}  // namespace hflow
