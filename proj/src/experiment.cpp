#include "hflow/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <sstream>

namespace hflow {

int exit_code_for(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::Completed:
    case TerminationReason::Stationary:
      return 0;
    case TerminationReason::Guard:
      return 2;
    case TerminationReason::SolverFailure:
      return 3;
  }
  return 3;
}

std::string csv_header() {
  return "t,area,volume,willmore_energy,sup_rho,sup_grad_rho,holder_seminorm,"
         "fit_center_x,fit_center_y,fit_center_z,fit_radius,fit_residual";
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string csv_row(const ObservableRecord& r) {
  std::ostringstream os;
  os << num(r.t) << ',' << num(r.area) << ',' << num(r.volume) << ','
     << num(r.willmore_energy) << ',' << num(r.sup_rho) << ',' << num(r.sup_grad_rho) << ','
     << num(r.holder_seminorm) << ',' << num(r.fit.center[0]) << ',' << num(r.fit.center[1])
     << ',' << num(r.fit.center[2]) << ',' << num(r.fit.radius) << ','
     << num(r.fit.residual);
  return os.str();
}

void write_obj(const std::string& path, const GraphGeometry& geom) {
  const ReferenceSurface& s = *geom.surface;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write mesh file '" + path + "'");
  out.precision(12);
  for (const Vec3& p : geom.psi) out << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';

  int n0 = s.grid.axis[0].n, n1 = s.grid.axis[1].n;
  if (s.m == 1) {
    for (int i = 0; i < n0; ++i) out << "l " << i + 1 << ' ' << (i + 1) % n0 + 1 << '\n';
    return;
  }
  bool pole = s.grid.axis[0].kind == AxisKind::Pole;
  int rows = pole ? n0 - 1 : n0;
  for (int i0 = 0; i0 < rows; ++i0)
    for (int i1 = 0; i1 < n1; ++i1) {
      int a = i0 * n1 + i1;
      int b = i0 * n1 + (i1 + 1) % n1;
      int c = ((i0 + 1) % n0) * n1 + (i1 + 1) % n1;
      int d = ((i0 + 1) % n0) * n1 + i1;
      out << "f " << a + 1 << ' ' << b + 1 << ' ' << c + 1 << '\n';
      out << "f " << a + 1 << ' ' << c + 1 << ' ' << d + 1 << '\n';
    }
  if (pole) {
    // Close the polar caps with fans to the averaged cap vertex.
    for (int side = 0; side < 2; ++side) {
      int i0 = side == 0 ? 0 : n0 - 1;
      Vec3 cap = {0.0, 0.0, 0.0};
      for (int i1 = 0; i1 < n1; ++i1) cap = cap + geom.psi[i0 * n1 + i1];
      cap = (1.0 / n1) * cap;
      out << "v " << cap[0] << ' ' << cap[1] << ' ' << cap[2] << '\n';
      int cap_id = n0 * n1 + side + 1;
      for (int i1 = 0; i1 < n1; ++i1) {
        int a = i0 * n1 + i1 + 1;
        int b = i0 * n1 + (i1 + 1) % n1 + 1;
        if (side == 0)
          out << "f " << cap_id << ' ' << b << ' ' << a << '\n';
        else
          out << "f " << cap_id << ' ' << a << ' ' << b << '\n';
      }
    }
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  auto t0 = std::chrono::steady_clock::now();

  fs::create_directories(config.output_dir);
  std::ofstream csv(fs::path(config.output_dir) / "observables.csv");
  if (!csv) throw ConfigError("output directory '" + config.output_dir + "' is not writable");
  csv << csv_header() << '\n';

  ReferenceSurface surface = build_reference(config.surface, config.resolution, config.flow.exec);
  HeightField rho0 = initial_height(surface, config.initial);
  FlowEngine engine(surface, config.flow);

  ExperimentResult result;
  std::vector<std::pair<double, double>> guard_history;  // (t, guard margin)
  int snap_id = 0;
  auto on_snapshot = [&](const FlowState& st, const GraphGeometry& geo) {
    ObservableRecord rec = measure(geo, st.t, config.holder_alpha);
    csv << csv_row(rec) << '\n';
    result.records.push_back(rec);
    guard_history.emplace_back(
        st.t, config.flow.guard_fraction * surface.tubular_radius - st.rho.sup());
    std::ostringstream name;
    name << "snap_" << std::setw(4) << std::setfill('0') << snap_id++ << ".obj";
    write_obj((fs::path(config.output_dir) / name.str()).string(), geo);
  };

  result.run = engine.run(rho0, on_snapshot);
  result.exit_code = exit_code_for(result.run.reason);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ofstream summary(fs::path(config.output_dir) / "summary.txt");
  summary.precision(12);
  summary << "termination_reason: " << to_string(result.run.reason) << '\n';
  summary << "steps: " << result.run.steps << '\n';
  summary << "final_time: " << result.run.state.t << '\n';
  summary << "wall_seconds: " << result.wall_seconds << '\n';
  summary << "tubular_radius: " << surface.tubular_radius << '\n';
  summary << "guard_margin_min: " << result.run.guard_margin_min << '\n';
  summary << "guard_margin_history:\n";
  for (auto& [t, m] : guard_history) summary << "  " << t << ' ' << m << '\n';
  return result;
}

OffsetCertificate run_certify(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  ReferenceSurface surface = build_reference(config.surface, config.resolution, config.flow.exec);
  HeightField rho0 = initial_height(surface, config.initial);
  OffsetCertificate cert = certify_offset_surface(surface, rho0.values, config.flow.exec);

  std::ofstream out(fs::path(config.output_dir) / "certificate.kv");
  if (!out) throw ConfigError("output directory '" + config.output_dir + "' is not writable");
  out.precision(12);
  out << "verdict = " << to_string(cert.certificate.verdict) << '\n';
  out << "radius = " << cert.radius << '\n';
  out << "proposal = " << cert.proposal << '\n';
  out << "kappa_sup = " << cert.kappa_sup << '\n';
  out << "slack = " << cert.certificate.slack << '\n';
  out << "sample_count = " << cert.certificate.sample_count << '\n';
  if (cert.certificate.witness) {
    const BallWitness& w = *cert.certificate.witness;
    out << "witness_center_node = " << w.center_node << '\n';
    out << "witness_hit_node = " << w.hit_node << '\n';
    out << "witness_side = " << w.side << '\n';
    out << "witness_distance = " << w.distance << '\n';
  }
  return cert;
}

}  // namespace hflow
