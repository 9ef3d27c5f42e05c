#include "hflow/flow.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace hflow {

std::string to_string(FlowKind f) { return f == FlowKind::SDF ? "sdf" : "willmore"; }
std::string to_string(SchemeKind s) { return s == SchemeKind::RK4 ? "rk4" : "imex"; }
std::string to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::Completed: return "completed";
    case TerminationReason::Guard: return "guard";
    case TerminationReason::Stationary: return "stationary";
    case TerminationReason::SolverFailure: return "solver_failure";
  }
  return "?";
}

void FlowConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(guard_fraction > 0.0 && guard_fraction < 1.0))
    throw ConfigError("guard_fraction must lie in (0, 1)");
  if (!(solver_tol > 0.0)) throw ConfigError("solver_tol must be positive");
  if (solver_max_iter < 1) throw ConfigError("solver_max_iter must be at least 1");
  if (snapshot_every < 1) throw ConfigError("snapshot_every must be at least 1");
}

std::vector<double> sdf_rhs(const GraphGeometry& geom, Execution exec) {
  std::vector<double> lap = laplace_beltrami(geom, geom.mean_curv, exec);
  int n = geom.size();
  std::vector<double> out(n);
  for_each_node(n, exec, [&](int i) { out[i] = -lap[i] / geom.beta[i]; });
  return out;
}

std::vector<double> willmore_rhs(const GraphGeometry& geom, Execution exec) {
  if (geom.m != 2)
    throw UnsupportedDimensionError("the Willmore flow requires an m = 2 hypersurface");
  std::vector<double> lap = laplace_beltrami(geom, geom.mean_curv, exec);
  int n = geom.size();
  std::vector<double> out(n);
  for_each_node(n, exec, [&](int i) {
    double h = geom.mean_curv[i];
    out[i] = -(lap[i] + 2.0 * h * (h * h - geom.gauss_curv[i])) / geom.beta[i];
  });
  return out;
}

std::vector<double> flow_rhs(FlowKind flow, const GraphGeometry& geom, Execution exec) {
  return flow == FlowKind::SDF ? sdf_rhs(geom, exec) : willmore_rhs(geom, exec);
}

std::vector<double> splitting_remainder(const PrincipalOperatorBuilder& builder,
                                        const GraphGeometry& geom, FlowKind flow,
                                        Execution exec) {
  SpMat a = builder.assemble(geom);
  int n = geom.size();
  Eigen::Map<const Eigen::VectorXd> rho_v(geom.rho.data(), n);
  Eigen::VectorXd arho = a * rho_v;
  std::vector<double> rhs = flow_rhs(flow, geom, exec);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = arho[i] + rhs[i];
  return out;
}

EllipticityRange ellipticity_check(const ReferenceSurface& surface, const std::vector<double>& rho,
                                   int directions_per_node) {
  GraphGeometry geo = build_graph_geometry(surface, rho);
  int m = surface.m;
  EllipticityRange range;
  range.r_min = std::numeric_limits<double>::infinity();
  range.r_max = 0.0;
  int ndir = (m == 1) ? 1 : directions_per_node;
  for (int idx = 0; idx < surface.size(); ++idx) {
    for (int d = 0; d < ndir; ++d) {
      double xi[2] = {1.0, 0.0};
      if (m == 2) {
        double t = M_PI * d / ndir;
        xi[0] = std::cos(t);
        xi[1] = std::sin(t);
      }
      double norm_ref = 0.0, norm_rho = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          norm_ref += surface.ginv[idx][i][j] * xi[i] * xi[j];
          norm_rho += geo.grho_inv[idx][i][j] * xi[i] * xi[j];
        }
      double symbol = (norm_rho / norm_ref) * (norm_rho / norm_ref);
      range.r_min = std::min(range.r_min, symbol);
      range.r_max = std::max(range.r_max, symbol);
    }
  }
  return range;
}

struct FlowEngine::SolverCache {
  Eigen::SparseLU<SpMat> lu;
  bool valid = false;
};

FlowEngine::FlowEngine(const ReferenceSurface& surface, FlowConfig config)
    : surface_(&surface), config_(config), builder_(surface), cache_(std::make_shared<SolverCache>()) {
  config_.validate();
  if (config_.flow == FlowKind::Willmore && surface.m != 2)
    throw UnsupportedDimensionError("the Willmore flow requires an m = 2 reference surface");
}

double FlowEngine::stationary_tolerance() const {
  double a = surface_->tubular_radius;
  return 1e-8 / (a * a * a);
}

bool FlowEngine::imex_step(FlowState& state) {
  int n = surface_->size();
  GraphGeometry geo = build_graph_geometry(*surface_, state.rho.values, config_.exec);
  SpMat a = builder_.assemble(geo);
  // remainder = A(rho) rho + rhs (same matrix reused for the implicit side)
  Eigen::Map<const Eigen::VectorXd> rho_v(state.rho.values.data(), n);
  Eigen::VectorXd arho = a * rho_v;
  std::vector<double> rhs = flow_rhs(config_.flow, geo, config_.exec);
  std::vector<double> rem(n);
  for (int i = 0; i < n; ++i) rem[i] = arho[i] + rhs[i];

  SpMat sys(n, n);
  sys.setIdentity();
  sys += config_.dt * a;

  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = state.rho.values[i] + config_.dt * rem[i];
  double bnorm = b.norm();
  if (bnorm == 0.0) bnorm = 1.0;

  // Frozen-LU iterative refinement: reuse the last factorization while it
  // still contracts, refactor on the current matrix otherwise.
  auto refine = [&](Eigen::VectorXd& x, int max_iter) -> std::pair<bool, int> {
    x = cache_->lu.solve(b);
    int it = 1;
    double res = (b - sys * x).norm() / bnorm;
    while (res > config_.solver_tol && it < max_iter) {
      Eigen::VectorXd corr = cache_->lu.solve(b - sys * x);
      x += corr;
      ++it;
      double next = (b - sys * x).norm() / bnorm;
      if (!(next < res * 0.9)) break;  // stagnation
      res = next;
    }
    state.last_report.solver_residual = (b - sys * x).norm() / bnorm;
    return {state.last_report.solver_residual <= config_.solver_tol, it};
  };

  Eigen::VectorXd x(n);
  bool ok = false;
  int iters = 0;
  if (cache_->valid) {
    auto [good, it] = refine(x, std::min(config_.solver_max_iter, 8));
    ok = good;
    iters = it;
  }
  if (!ok) {
    cache_->lu.compute(sys);
    if (cache_->lu.info() != Eigen::Success) {
      cache_->valid = false;
      return false;
    }
    cache_->valid = true;
    auto [good, it] = refine(x, config_.solver_max_iter);
    ok = good;
    iters += it;
  }
  state.last_report.solver_iterations = iters;
  if (!ok) return false;

  double max_rate = 0.0;
  for (int i = 0; i < n; ++i)
    max_rate = std::max(max_rate, std::abs(x[i] - state.rho.values[i]) / config_.dt);
  for (int i = 0; i < n; ++i) state.rho.values[i] = x[i];
  state.last_report.max_dt_rho = max_rate;
  state.t += config_.dt;
  ++state.step_count;
  return true;
}

void FlowEngine::rk4_step(FlowState& state) {
  int n = surface_->size();
  double dt = config_.dt;
  const std::vector<double>& r0 = state.rho.values;

  auto eval = [&](const std::vector<double>& r) {
    GraphGeometry geo = build_graph_geometry(*surface_, r, config_.exec);
    return flow_rhs(config_.flow, geo, config_.exec);
  };

  std::vector<double> k1 = eval(r0);
  std::vector<double> tmp(n);
  for (int i = 0; i < n; ++i) tmp[i] = r0[i] + 0.5 * dt * k1[i];
  std::vector<double> k2 = eval(tmp);
  for (int i = 0; i < n; ++i) tmp[i] = r0[i] + 0.5 * dt * k2[i];
  std::vector<double> k3 = eval(tmp);
  for (int i = 0; i < n; ++i) tmp[i] = r0[i] + dt * k3[i];
  std::vector<double> k4 = eval(tmp);

  double max_rate = 0.0;
  for (int i = 0; i < n; ++i) {
    double incr = (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
    max_rate = std::max(max_rate, std::abs(incr));
    state.rho.values[i] = r0[i] + dt * incr;
  }
  state.last_report.max_dt_rho = max_rate;
  state.t += dt;
  ++state.step_count;
}

bool FlowEngine::step(FlowState& state) {
  state.last_report = StepReport{};
  bool ok = true;
  if (config_.scheme == SchemeKind::IMEX)
    ok = imex_step(state);
  else
    rk4_step(state);
  double sup = state.rho.sup();
  state.last_report.guard_margin = config_.guard_fraction * surface_->tubular_radius - sup;
  return ok;
}

RunResult FlowEngine::run(const HeightField& initial, const SnapshotFn& on_snapshot) {
  initial.require_admissible();
  RunResult result;
  result.state.rho = initial;
  result.state.t = 0.0;
  result.guard_margin_min = std::numeric_limits<double>::infinity();

  double a = surface_->tubular_radius;
  double guard_level = config_.guard_fraction * a;
  double stat_tol = stationary_tolerance();
  cache_->valid = false;

  auto snapshot = [&](const FlowState& st) {
    if (on_snapshot) {
      GraphGeometry geo = build_graph_geometry(*surface_, st.rho.values, config_.exec);
      on_snapshot(st, geo);
    }
  };

  snapshot(result.state);

  // Initial state may already sit on the guard level.
  if (initial.sup() >= guard_level) {
    result.reason = TerminationReason::Guard;
    result.sup_rho_before_last = initial.sup();
    return result;
  }

  long max_steps = static_cast<long>(std::ceil(config_.t_end / config_.dt - 1e-12));
  while (result.state.step_count < max_steps) {
    FlowState candidate = result.state;
    double sup_before = candidate.rho.sup();
    bool ok;
    try {
      ok = step(candidate);
    } catch (const AdmissibilityError&) {
      // The step left the tubular regime entirely; do not expose it.
      result.reason = TerminationReason::Guard;
      result.sup_rho_before_last = sup_before;
      return result;
    }
    if (!ok) {
      result.state.last_report = candidate.last_report;
      result.reason = TerminationReason::SolverFailure;
      return result;
    }
    double sup = candidate.rho.sup();
    if (sup >= a) {
      // Guard soundness: never expose a state outside the tubular regime.
      result.reason = TerminationReason::Guard;
      result.sup_rho_before_last = sup_before;
      return result;
    }
    result.state = candidate;
    result.steps = result.state.step_count;
    result.guard_margin_min = std::min(result.guard_margin_min, candidate.last_report.guard_margin);

    if (sup >= guard_level) {
      snapshot(result.state);
      result.reason = TerminationReason::Guard;
      result.sup_rho_before_last = sup_before;
      return result;
    }
    if (result.state.step_count % config_.snapshot_every == 0) snapshot(result.state);
    if (candidate.last_report.max_dt_rho < stat_tol) {
      if (result.state.step_count % config_.snapshot_every != 0) snapshot(result.state);
      result.reason = TerminationReason::Stationary;
      return result;
    }
  }
  if (result.state.step_count % config_.snapshot_every != 0) snapshot(result.state);
  result.reason = TerminationReason::Completed;
  return result;
}

}  // namespace hflow
