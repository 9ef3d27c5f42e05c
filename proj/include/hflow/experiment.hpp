#pragma once

#include "hflow/certifier.hpp"
#include "hflow/config.hpp"
#include "hflow/observables.hpp"

namespace hflow {

struct ExperimentResult {
  RunResult run;
  std::vector<ObservableRecord> records;  // one row per snapshot
  double wall_seconds = 0.0;
  int exit_code = 0;
};

// Process exit code convention: 0 completed/stationary, 2 guard,
// 3 solver_failure (1 is reserved for config errors).
int exit_code_for(TerminationReason reason);

// Builds the surface, runs the flow, and writes observables.csv,
// snap_000N.obj, and summary.txt into config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Certifier entry point: writes certificate.kv into config.output_dir and
// returns the certificate of the initial surface Gamma_rho0.
OffsetCertificate run_certify(const ExperimentConfig& config);

std::string csv_header();
std::string csv_row(const ObservableRecord& rec);

// Triangulated OBJ mesh of the embedded graph (polyline for m = 1).
void write_obj(const std::string& path, const GraphGeometry& geom);

}  // namespace hflow
