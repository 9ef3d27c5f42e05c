#pragma once

#include <optional>
#include <string>

#include "hflow/flow.hpp"

namespace hflow {

// Initial height field specification: a constant, a sum of trig modes in
// chart coordinates, or a whitespace-separated value file matching the grid.
enum class InitialKind { Constant, Modes, File };

struct InitialSpec {
  InitialKind kind = InitialKind::Constant;
  double constant = 0.0;
  ModeSum modes;
  std::string file;
};

struct ExperimentConfig {
  SurfaceSpec surface;
  std::array<int, 2> resolution = {64, 64};
  InitialSpec initial;
  FlowConfig flow;
  std::string output_dir = "out";
  double holder_alpha = 0.5;
  std::optional<std::string> preset_name;
};

// Parses the flat sectioned key-value format ([surface]/[initial]/[flow]/
// [output]); unknown keys or sections are rejected by name (ConfigError).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Echoes a config back into the same format; parse(echo(c)) describes the
// identical run.
std::string echo_config(const ExperimentConfig& config);

// Built-in experiment presets; unknown names raise ConfigError listing the
// valid ones.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Evaluates the initial-condition spec on the surface grid.
HeightField initial_height(const ReferenceSurface& surface, const InitialSpec& spec);

}  // namespace hflow
