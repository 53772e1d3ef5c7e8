#include <cstdio>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "swe/errors.hpp"

using namespace swe;
using namespace swe::app;

namespace {

std::vector<double> parse_list(const std::string &s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception &) {
      throw ConfigError("bad number '" + item + "' in list '" + s + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

MeshKind parse_domain(const std::string &s) {
  if (s == "plane") return MeshKind::Plane;
  if (s == "plane-irregular" || s == "plane_irregular") return MeshKind::PlaneIrregular;
  if (s == "sphere") return MeshKind::Sphere;
  throw ConfigError("unknown domain '" + s + "'");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Rotating shallow-water solver with energy-conserving enstrophy dissipation"};
  app.require_subcommand(1);

  RunArgs run;
  std::string mode_str;
  double t_end_days = -1.0, dt = -1.0;
  auto *run_cmd = app.add_subcommand("run", "integrate a benchmark case");
  run_cmd->add_option("--config", run.config_path, "config file (key = value with [sections])");
  run_cmd->add_option("--case", run.case_name, "case when no config is given: vortex_pair, shear_flow, mountain");
  run_cmd->add_option("--out", run.out_dir, "output directory");
  run_cmd->add_option("--mode", mode_str, "dissipation: none, casimir or biharmonic (overrides the config)");
  run_cmd->add_option("--days", t_end_days, "simulated days (overrides the config)");
  run_cmd->add_option("--dt", dt, "time step in seconds, 0 for the CFL default (overrides the config)");
  run_cmd->add_option("--resume", run.resume, "continue from a checkpoint");
  run_cmd->add_option("--threads", run.threads, "worker threads (the solver runs sequentially)");
  run_cmd->add_flag("--deterministic,!--no-deterministic", run.deterministic, "fixed reduction order (default)");
  run_cmd->add_flag("--export-mesh", run.export_mesh, "write mesh/triangles.csv, edges.csv, duals.csv");
  run_cmd->add_flag("--quiet", run.quiet, "no per-record progress on stderr");

  std::string domain = "plane", out_csv = "-";
  int levels = 3, first_level = 3;
  auto *comm_cmd = app.add_subcommand("convergence-commutator", "commutator error under refinement");
  comm_cmd->add_option("--domain", domain, "plane, plane-irregular or sphere");
  comm_cmd->add_option("--levels", levels, "number of refinement levels")->check(CLI::PositiveNumber);
  comm_cmd->add_option("--first-level", first_level, "coarsest sphere level");
  comm_cmd->add_option("--out", out_csv, "CSV path, - for stdout");

  std::string case_name = "vortex", dts = "900,1800,3600", energy_cfg;
  double energy_days = 2.0;
  long triangles = 2048;
  auto *energy_cmd = app.add_subcommand("convergence-energy", "energy error against the time step");
  energy_cmd->add_option("--case", case_name, "vortex (the only supported case)");
  energy_cmd->add_option("--dts", dts, "comma-separated time steps in seconds");
  energy_cmd->add_option("--days", energy_days, "simulated days");
  energy_cmd->add_option("--triangles", triangles, "plane mesh size (2 n^2)");
  energy_cmd->add_option("--config", energy_cfg, "config file instead of the defaults");
  energy_cmd->add_option("--out", out_csv, "CSV path, - for stdout");

  std::string checkpoint, spec_cfg, spec_out = "spectrum.csv";
  int grid = 128;
  auto *spec_cmd = app.add_subcommand("spectra", "kinetic-energy and enstrophy spectra of a checkpoint");
  spec_cmd->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  spec_cmd->add_option("--config", spec_cfg, "config of the run (default: config.ini beside the checkpoint)");
  spec_cmd->add_option("--grid", grid, "sampling grid size")->check(CLI::Range(2, 8192));
  spec_cmd->add_option("--out", spec_out, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) {
      if (!mode_str.empty()) run.mode = parse_mode(mode_str);
      if (t_end_days >= 0.0) run.t_end_days = t_end_days;
      if (dt >= 0.0) run.dt = dt;
      const RunResult r = cmd_run(run);
      std::fprintf(stderr, "done: %ld steps, t = %.6g s\n", r.steps, r.state.t);
    } else if (*comm_cmd) {
      write_convergence_csv(out_csv, commutator_convergence(parse_domain(domain), levels, first_level));
    } else if (*energy_cmd) {
      if (case_name != "vortex" && case_name != "vortex_pair") throw ConfigError("convergence-energy supports only the vortex case");
      SimConfig cfg = energy_cfg.empty() ? default_config(CaseId::VortexPair) : load_config(energy_cfg);
      if (energy_cfg.empty()) {
        const long side = std::lround(std::sqrt(triangles / 2.0));
        if (2 * side * side != triangles) throw ConfigError("--triangles must be 2 n^2");
        cfg.mesh.nx = cfg.mesh.ny = static_cast<int>(side);
      }
      cfg.time.t_end = energy_days * 86400.0;
      write_energy_csv(out_csv, energy_convergence(cfg, parse_list(dts)));
    } else if (*spec_cmd) {
      write_spectrum_csv(spec_out, cmd_spectra(checkpoint, spec_cfg, grid));
    }
  } catch (const ConfigError &e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const NumericalError &e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalError;
  } catch (const MeshValidationError &e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kMeshError;
  } catch (const MeshError &e) {
    std::fprintf(stderr, "mesh error: %s\n", e.what());
    return kMeshError;
  }
  return kOk;
}
