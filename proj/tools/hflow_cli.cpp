#include <CLI11.hpp>
#include <iostream>

#include "hflow/experiment.hpp"

namespace {

int do_run(const hflow::ExperimentConfig& config) {
  hflow::ExperimentResult result = hflow::run_experiment(config);
  std::cout << "termination: " << hflow::to_string(result.run.reason) << "\n";
  std::cout << "steps: " << result.run.steps << "\n";
  std::cout << "final time: " << result.run.state.t << "\n";
  std::cout << "wall seconds: " << result.wall_seconds << "\n";
  std::cout << "artifacts: " << config.output_dir << "/\n";
  return result.exit_code;
}

int do_certify(const hflow::ExperimentConfig& config) {
  hflow::OffsetCertificate cert = hflow::run_certify(config);
  std::cout << "verdict: " << hflow::to_string(cert.certificate.verdict) << "\n";
  std::cout << "certified radius: " << cert.radius << "\n";
  std::cout << "proposal: " << cert.proposal << "\n";
  std::cout << "kappa_sup: " << cert.kappa_sup << "\n";
  std::cout << "slack: " << cert.certificate.slack << "\n";
  if (cert.certificate.witness) {
    const hflow::BallWitness& w = *cert.certificate.witness;
    std::cout << "witness: center node " << w.center_node << " side " << w.side
              << " hit node " << w.hit_node << " distance " << w.distance << "\n";
  }
  return cert.certificate.verdict == hflow::Verdict::Certified ? 0 : 2;
}

bool report(const char* name, bool ok) {
  std::cout << (ok ? "pass" : "FAIL") << "  " << name << "\n";
  return ok;
}

// Small-grid invariant suite for quick installation checks.
int do_check() {
  using namespace hflow;
  bool all = true;
  try {
    for (SurfaceKindTag kind : {SurfaceKindTag::Circle, SurfaceKindTag::Sphere,
                                SurfaceKindTag::Cylinder, SurfaceKindTag::Torus}) {
      SurfaceSpec spec;
      spec.kind = kind;
      ReferenceSurface s = build_reference(spec, {32, 32});
      std::string name = "geometry consistency on " + to_string(kind);
      all &= report(name.c_str(), geometry_consistency_check(s).max() < 2e-2);
    }

    SurfaceSpec sphere;
    sphere.kind = SurfaceKindTag::Sphere;
    ReferenceSurface s = build_reference(sphere, {24, 48});
    std::vector<double> rho(s.size(), 0.2);
    EllipticityRange er = ellipticity_check(s, rho);
    all &= report("uniform ellipticity (sphere, rho = 0.2)", er.r_min > 0.0);

    GraphGeometry geo = build_graph_geometry(s, rho);
    double h_err = 0.0;
    for (double h : geo.mean_curv) h_err = std::max(h_err, std::abs(h + 1.0 / 1.2));
    all &= report("concentric sphere curvature", h_err < 1e-10);

    ExperimentConfig cfg = preset("sphere_equilibrium");
    cfg.resolution = {16, 32};
    cfg.flow.t_end = 10 * cfg.flow.dt;
    ReferenceSurface eq = build_reference(cfg.surface, cfg.resolution);
    FlowEngine engine(eq, cfg.flow);
    RunResult rr = engine.run(initial_height(eq, cfg.initial));
    all &= report("sphere equilibrium short run",
                  rr.reason != TerminationReason::SolverFailure && rr.state.rho.sup() < 1e-8);
  } catch (const std::exception& e) {
    std::cout << "FAIL  unexpected error: " << e.what() << "\n";
    all = false;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal-graph geometric flow toolkit"};
  app.require_subcommand(1);

  std::string config_path, preset_name, output_override;
  bool emit_config = false;

  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment from a config file");
  run_cmd->add_option("config", config_path, "config file path")->required();
  run_cmd->add_option("--output", output_override, "override the output directory");

  CLI::App* preset_cmd = app.add_subcommand("preset", "Run (or emit) a built-in preset");
  preset_cmd->add_option("name", preset_name, "preset name")->required();
  preset_cmd->add_flag("--emit-config", emit_config, "print the preset config and exit");
  preset_cmd->add_option("--output", output_override, "override the output directory");

  CLI::App* certify_cmd = app.add_subcommand("certify", "Certify a tubular radius for the configured surface");
  certify_cmd->add_option("config", config_path, "config file path")->required();
  certify_cmd->add_option("--output", output_override, "override the output directory");

  app.add_subcommand("check", "Run the built-in invariant suite on small grids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      hflow::ExperimentConfig cfg = hflow::load_config(config_path);
      if (!output_override.empty()) cfg.output_dir = output_override;
      return do_run(cfg);
    }
    if (preset_cmd->parsed()) {
      hflow::ExperimentConfig cfg = hflow::preset(preset_name);
      if (!output_override.empty()) cfg.output_dir = output_override;
      if (emit_config) {
        std::cout << hflow::echo_config(cfg);
        return 0;
      }
      return do_run(cfg);
    }
    if (certify_cmd->parsed()) {
      hflow::ExperimentConfig cfg = hflow::load_config(config_path);
      if (!output_override.empty()) cfg.output_dir = output_override;
      return do_certify(cfg);
    }
    return do_check();
  } catch (const hflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
