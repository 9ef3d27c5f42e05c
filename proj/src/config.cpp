#include "hflow/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hflow {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  double x = parse_double(key, v);
  int i = static_cast<int>(std::lround(x));
  if (std::abs(x - i) > 1e-12)
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  return i;
}

bool parse_bool_word(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

ModeSum parse_mode_sum(const std::string& key, const std::string& v) {
  ModeSum sum;
  std::stringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    try {
      sum.modes.push_back(parse_mode(part));
    } catch (const ConfigError& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  if (sum.empty()) throw ConfigError("config key '" + key + "': empty mode sum");
  return sum;
}

std::array<int, 2> parse_int_pair(const std::string& key, const std::string& v) {
  std::stringstream ss(v);
  std::array<int, 2> out = {0, 0};
  std::string a, b;
  ss >> a;
  out[0] = parse_int(key, a);
  if (ss >> b)
    out[1] = parse_int(key, b);
  else
    out[1] = out[0];
  std::string rest;
  if (ss >> rest) throw ConfigError("config key '" + key + "': too many values");
  return out;
}

std::array<double, 2> parse_double_pair(const std::string& key, const std::string& v) {
  std::stringstream ss(v);
  std::array<double, 2> out = {0.0, 0.0};
  std::string a, b;
  ss >> a;
  out[0] = parse_double(key, a);
  if (ss >> b)
    out[1] = parse_double(key, b);
  else
    out[1] = out[0];
  std::string rest;
  if (ss >> rest) throw ConfigError("config key '" + key + "': too many values");
  return out;
}

void apply_surface(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "kind") {
    if (v == "circle") c.surface.kind = SurfaceKindTag::Circle;
    else if (v == "sphere") c.surface.kind = SurfaceKindTag::Sphere;
    else if (v == "cylinder") c.surface.kind = SurfaceKindTag::Cylinder;
    else if (v == "torus") c.surface.kind = SurfaceKindTag::Torus;
    else if (v == "graph") c.surface.kind = SurfaceKindTag::Graph;
    else throw ConfigError("config key 'surface.kind': unknown kind '" + v + "'");
  } else if (key == "radius") {
    c.surface.radius = parse_double("surface.radius", v);
  } else if (key == "ring_radius") {
    c.surface.ring_radius = parse_double("surface.ring_radius", v);
  } else if (key == "length") {
    c.surface.length = parse_double("surface.length", v);
  } else if (key == "resolution") {
    c.resolution = parse_int_pair("surface.resolution", v);
  } else if (key == "graph_profile") {
    c.surface.graph_profile = parse_mode_sum("surface.graph_profile", v);
  } else if (key == "graph_dim") {
    c.surface.graph_dim = parse_int("surface.graph_dim", v);
  } else if (key == "box") {
    c.surface.box = parse_double_pair("surface.box", v);
  } else if (key == "graph_radius_cap") {
    c.surface.graph_radius_cap = parse_double("surface.graph_radius_cap", v);
  } else {
    throw ConfigError("unknown config key 'surface." + key + "'");
  }
}

void apply_initial(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "constant") {
    c.initial.kind = InitialKind::Constant;
    c.initial.constant = parse_double("initial.constant", v);
  } else if (key == "modes") {
    c.initial.kind = InitialKind::Modes;
    c.initial.modes = parse_mode_sum("initial.modes", v);
  } else if (key == "file") {
    c.initial.kind = InitialKind::File;
    c.initial.file = v;
  } else {
    throw ConfigError("unknown config key 'initial." + key + "'");
  }
}

void apply_flow(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "kind") {
    if (v == "sdf") c.flow.flow = FlowKind::SDF;
    else if (v == "willmore") c.flow.flow = FlowKind::Willmore;
    else throw ConfigError("config key 'flow.kind': unknown flow '" + v + "'");
  } else if (key == "scheme") {
    if (v == "imex") c.flow.scheme = SchemeKind::IMEX;
    else if (v == "rk4") c.flow.scheme = SchemeKind::RK4;
    else throw ConfigError("config key 'flow.scheme': unknown scheme '" + v + "'");
  } else if (key == "dt") {
    c.flow.dt = parse_double("flow.dt", v);
  } else if (key == "t_end") {
    c.flow.t_end = parse_double("flow.t_end", v);
  } else if (key == "guard_fraction") {
    c.flow.guard_fraction = parse_double("flow.guard_fraction", v);
  } else if (key == "solver_tol") {
    c.flow.solver_tol = parse_double("flow.solver_tol", v);
  } else if (key == "solver_max_iter") {
    c.flow.solver_max_iter = parse_int("flow.solver_max_iter", v);
  } else if (key == "snapshot_every") {
    c.flow.snapshot_every = parse_int("flow.snapshot_every", v);
  } else if (key == "parallel") {
    c.flow.exec = parse_bool_word("flow.parallel", v) ? Execution::Parallel : Execution::Serial;
  } else {
    throw ConfigError("unknown config key 'flow." + key + "'");
  }
}

void apply_output(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "directory") {
    c.output_dir = v;
  } else if (key == "holder_alpha") {
    c.holder_alpha = parse_double("output.holder_alpha", v);
  } else {
    throw ConfigError("unknown config key 'output." + key + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "surface" && section != "initial" && section != "flow" &&
          section != "output")
        throw ConfigError("unknown config section '" + section + "'");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("config key '" + key + "' appears before any section header");
    if (section == "surface") apply_surface(c, key, value);
    else if (section == "initial") apply_initial(c, key, value);
    else if (section == "flow") apply_flow(c, key, value);
    else apply_output(c, key, value);
  }
  c.flow.validate();
  if (c.resolution[0] < 8 || c.resolution[1] < 1)
    throw ConfigError("config key 'surface.resolution': too coarse");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_mode_sum(const ModeSum& sum) {
  std::string out;
  for (size_t i = 0; i < sum.modes.size(); ++i) {
    if (i) out += "; ";
    out += format_mode(sum.modes[i]);
  }
  return out;
}

}  // namespace

std::string echo_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[surface]\n";
  os << "kind = " << to_string(c.surface.kind) << "\n";
  os << "resolution = " << c.resolution[0] << " " << c.resolution[1] << "\n";
  switch (c.surface.kind) {
    case SurfaceKindTag::Circle:
    case SurfaceKindTag::Sphere:
      os << "radius = " << fmt(c.surface.radius) << "\n";
      break;
    case SurfaceKindTag::Cylinder:
      os << "radius = " << fmt(c.surface.radius) << "\n";
      os << "length = " << fmt(c.surface.length) << "\n";
      break;
    case SurfaceKindTag::Torus:
      os << "radius = " << fmt(c.surface.radius) << "\n";
      os << "ring_radius = " << fmt(c.surface.ring_radius) << "\n";
      break;
    case SurfaceKindTag::Graph:
      os << "graph_profile = " << format_mode_sum(c.surface.graph_profile) << "\n";
      os << "graph_dim = " << c.surface.graph_dim << "\n";
      os << "box = " << fmt(c.surface.box[0]) << " " << fmt(c.surface.box[1]) << "\n";
      os << "graph_radius_cap = " << fmt(c.surface.graph_radius_cap) << "\n";
      break;
  }
  os << "\n[initial]\n";
  switch (c.initial.kind) {
    case InitialKind::Constant: os << "constant = " << fmt(c.initial.constant) << "\n"; break;
    case InitialKind::Modes: os << "modes = " << format_mode_sum(c.initial.modes) << "\n"; break;
    case InitialKind::File: os << "file = " << c.initial.file << "\n"; break;
  }
  os << "\n[flow]\n";
  os << "kind = " << to_string(c.flow.flow) << "\n";
  os << "scheme = " << to_string(c.flow.scheme) << "\n";
  os << "dt = " << fmt(c.flow.dt) << "\n";
  os << "t_end = " << fmt(c.flow.t_end) << "\n";
  os << "guard_fraction = " << fmt(c.flow.guard_fraction) << "\n";
  os << "solver_tol = " << fmt(c.flow.solver_tol) << "\n";
  os << "solver_max_iter = " << c.flow.solver_max_iter << "\n";
  os << "snapshot_every = " << c.flow.snapshot_every << "\n";
  os << "parallel = " << (c.flow.exec == Execution::Parallel ? "true" : "false") << "\n";
  os << "\n[output]\n";
  os << "directory = " << c.output_dir << "\n";
  os << "holder_alpha = " << fmt(c.holder_alpha) << "\n";
  return os.str();
}

std::vector<std::string> preset_names() {
  return {"sphere_equilibrium", "sdf_volume_check",   "cylinder_willmore",
          "cylinder_sdf_perturbed", "sphere_stability", "nonconvex_to_sphere"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.preset_name = name;
  if (name == "sphere_equilibrium") {
    // Round unit sphere is a Willmore equilibrium; rho stays at machine zero.
    c.surface.kind = SurfaceKindTag::Sphere;
    c.surface.radius = 1.0;
    c.resolution = {32, 64};
    c.initial.kind = InitialKind::Constant;
    c.initial.constant = 0.0;
    c.flow.flow = FlowKind::Willmore;
    c.flow.scheme = SchemeKind::IMEX;
    c.flow.dt = 1e-4;
    c.flow.t_end = 0.1;
    c.flow.snapshot_every = 100;
    c.output_dir = "out_sphere_equilibrium";
  } else if (name == "sdf_volume_check") {
    // Curve diffusion on a perturbed circle: enclosed area is conserved.
    c.surface.kind = SurfaceKindTag::Circle;
    c.surface.radius = 1.0;
    c.resolution = {256, 1};
    c.initial.kind = InitialKind::Modes;
    c.initial.modes.modes.push_back(parse_mode("0.2 * cos(2*x)"));
    c.flow.flow = FlowKind::SDF;
    c.flow.scheme = SchemeKind::IMEX;
    c.flow.dt = 1e-5;
    c.flow.t_end = 0.05;
    c.flow.snapshot_every = 250;
    c.output_dir = "out_sdf_volume_check";
  } else if (name == "cylinder_willmore") {
    // Axisymmetric expanding tube: radius follows (1 + t)^{1/4}.
    c.surface.kind = SurfaceKindTag::Cylinder;
    c.surface.radius = 1.0;
    c.surface.length = 2.0 * M_PI;
    c.resolution = {128, 16};
    c.initial.kind = InitialKind::Constant;
    c.initial.constant = 0.0;
    c.flow.flow = FlowKind::Willmore;
    c.flow.scheme = SchemeKind::IMEX;
    c.flow.dt = 1e-4;
    c.flow.t_end = 1.0;
    c.flow.snapshot_every = 500;
    c.output_dir = "out_cylinder_willmore";
  } else if (name == "cylinder_sdf_perturbed") {
    // Axially perturbed tube under surface diffusion: volume conserved,
    // area decreasing, relaxes back toward a straight cylinder.
    c.surface.kind = SurfaceKindTag::Cylinder;
    c.surface.radius = 1.0;
    c.surface.length = 2.0 * M_PI;
    c.resolution = {64, 16};
    c.initial.kind = InitialKind::Modes;
    c.initial.modes.modes.push_back(parse_mode("0.05 * cos(1*x)"));
    c.flow.flow = FlowKind::SDF;
    c.flow.scheme = SchemeKind::IMEX;
    c.flow.dt = 1e-4;
    c.flow.t_end = 0.5;
    c.flow.snapshot_every = 100;
    c.output_dir = "out_cylinder_sdf_perturbed";
  } else if (name == "sphere_stability") {
    // Pole-free mid-latitude bump (0.05 * sin^2(theta) sin(2 phi)); the
    // amplitude is the largest found to converge under h-refinement.
    c.surface.kind = SurfaceKindTag::Sphere;
    c.surface.radius = 1.0;
    c.resolution = {32, 64};
    c.initial.kind = InitialKind::Modes;
    c.initial.modes.modes.push_back(parse_mode("0.025 * sin(2*y)"));
    c.initial.modes.modes.push_back(parse_mode("-0.025 * cos(2*x) * sin(2*y)"));
    c.flow.flow = FlowKind::Willmore;
    c.flow.scheme = SchemeKind::IMEX;
    c.flow.dt = 2e-4;
    c.flow.t_end = 2.0;
    c.flow.guard_fraction = 0.8;
    c.flow.snapshot_every = 100;
    c.output_dir = "out_sphere_stability";
  } else if (name == "nonconvex_to_sphere") {
    // Higher-frequency bump 0.04 * sin^4(theta) cos(8 phi): the initial
    // surface has principal curvatures of both signs yet still converges.
    c.surface.kind = SurfaceKindTag::Sphere;
    c.surface.radius = 1.0;
    c.resolution = {48, 96};
    c.initial.kind = InitialKind::Modes;
    c.initial.modes.modes.push_back(parse_mode("0.015 * cos(8*y)"));
    c.initial.modes.modes.push_back(parse_mode("-0.02 * cos(2*x) * cos(8*y)"));
    c.initial.modes.modes.push_back(parse_mode("0.005 * cos(4*x) * cos(8*y)"));
    c.flow.flow = FlowKind::Willmore;
    c.flow.scheme = SchemeKind::IMEX;
    c.flow.dt = 1e-4;
    c.flow.t_end = 2.0;
    c.flow.guard_fraction = 0.8;
    c.flow.snapshot_every = 100;
    c.output_dir = "out_nonconvex_to_sphere";
  } else {
    std::string list;
    for (const std::string& p : preset_names()) list += (list.empty() ? "" : ", ") + p;
    throw ConfigError("unknown preset '" + name + "'; valid presets: " + list);
  }
  return c;
}

HeightField initial_height(const ReferenceSurface& surface, const InitialSpec& spec) {
  HeightField rho(surface);
  int n1 = surface.grid.axis[1].n;
  switch (spec.kind) {
    case InitialKind::Constant:
      for (double& v : rho.values) v = spec.constant;
      break;
    case InitialKind::Modes:
      for (int idx = 0; idx < surface.size(); ++idx) {
        int i0 = idx / n1, i1 = idx % n1;
        rho.values[idx] =
            spec.modes.eval(surface.grid.coord(0, i0), surface.grid.coord(1, i1));
      }
      break;
    case InitialKind::File: {
      std::ifstream in(spec.file);
      if (!in) throw ConfigError("config key 'initial.file': cannot open '" + spec.file + "'");
      for (int idx = 0; idx < surface.size(); ++idx)
        if (!(in >> rho.values[idx]))
          throw ConfigError("config key 'initial.file': '" + spec.file + "' holds fewer than " +
                            std::to_string(surface.size()) + " values");
      double extra;
      if (in >> extra)
        throw ConfigError("config key 'initial.file': '" + spec.file + "' holds more than " +
                          std::to_string(surface.size()) + " values");
      break;
    }
  }
  return rho;
}

}  // namespace hflow
