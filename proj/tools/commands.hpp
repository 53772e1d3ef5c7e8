#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace swe::app {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3, kMeshError = 4 };

/// Thrown when a generated mesh fails validation.
class MeshValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Builds the mesh and throws MeshValidationError if any invariant fails.
Mesh build_validated_mesh(const SimConfig &c);

struct RunArgs {
  std::string config_path; // empty: defaults for `case_name`
  std::string case_name = "vortex_pair";
  std::string out_dir = "out";
  std::optional<DissipationMode> mode;
  std::optional<double> t_end_days;
  std::optional<double> dt;
  bool deterministic = true;
  int threads = 1;
  bool export_mesh = false;
  std::string resume; // checkpoint to continue from
  bool quiet = false;
};

/// Runs a case and writes manifest.json, config.ini, diagnostics.csv,
/// snapshots/, spectra/ and checkpoint.bin into `out_dir`.
RunResult cmd_run(const RunArgs &args);

struct ConvergenceRow {
  long n = 0; // triangles
  double l2 = 0.0;
  double linf = 0.0;
};

/// Commutator errors for successive refinements. Plane kinds start at
/// 2 * 32^2 triangles and double nx, ny per level; the sphere starts at
/// `first_sphere_level`.
std::vector<ConvergenceRow> commutator_convergence(MeshKind kind, int levels, int first_sphere_level = 3);
void write_convergence_csv(const std::string &path, const std::vector<ConvergenceRow> &rows);

struct EnergyRow {
  double dt = 0.0;
  double rel_energy_error = 0.0; // |H(T) - H(0)| / |H(0)|
};

/// Vortex case on `cfg`'s mesh with mode none, integrated to cfg.time.t_end
/// once per time step.
std::vector<EnergyRow> energy_convergence(const SimConfig &cfg, const std::vector<double> &dts);
void write_energy_csv(const std::string &path, const std::vector<EnergyRow> &rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

/// Spectrum of a checkpoint. The mesh is rebuilt from `config_path`, or from
/// config.ini beside the checkpoint when that is empty.
Spectrum cmd_spectra(const std::string &checkpoint, const std::string &config_path, int grid);

/// Relative potential vorticity q - f / H̄ with H̄ the mean depth.
DualField relative_pv(const Mesh &mesh, const State &s, const DualField &f);

} // namespace swe::app
