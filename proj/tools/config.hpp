#pragma once

#include <map>
#include <string>

#include "swe/cases.hpp"
#include "swe/integrator.hpp"

namespace swe::app {

enum class MeshKind { Plane, PlaneIrregular, Sphere };

struct MeshConfig {
  MeshKind kind = MeshKind::Plane;
  int nx = 32; // plane: 2 nx ny triangles
  int ny = 32;
  double lx = constants::plane_lx;
  double ly = constants::plane_ly;
  int level = 5; // sphere: 20 * 4^level triangles
  IrregularPlaneOptions irregular;
};

struct OutputConfig {
  long diag_every = 1;
  long snapshot_every = 0;
  long checkpoint_every = 0;
  long spectra_every = 0;
  int spectra_grid = 128;
};

/// Fully resolved run description; every physical value is SI.
struct SimConfig {
  CaseId case_id = CaseId::VortexPair;
  MeshConfig mesh;
  VortexParams vortex;
  ShearParams shear;
  MountainParams mountain;
  double f0 = constants::plane_f;
  double g = constants::gravity;
  double radius = constants::earth_radius;
  double omega = constants::earth_omega;
  DissipationConfig diss;
  TimeConfig time;
  OutputConfig output;
};

/// Defaults for a case: published parameters, desk-scale mesh, 10 days.
SimConfig default_config(CaseId id);

/// Parses `[section]` headers and `key = value` lines; `#` starts a comment.
/// Keys carry their unit in the name (dt_s, t_end_days, nu_km4_per_day).
/// Unknown keys and malformed values raise ConfigError naming the line.
SimConfig parse_config(const std::string &text, const std::string &origin = "<config>");
SimConfig load_config(const std::string &path);

/// The config written back in the same format, SI keys only; parsing it
/// again yields the same SimConfig.
std::string dump_config(const SimConfig &c);

DissipationMode parse_mode(const std::string &s);
std::string to_string(DissipationMode m);

Mesh build_mesh(const SimConfig &c);
/// Initial condition and physical parameters for the configured case.
CaseSetup build_case(const SimConfig &c, const Mesh &mesh);

} // namespace swe::app
