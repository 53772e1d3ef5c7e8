#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "swe/errors.hpp"

#ifndef SWE_VERSION
#define SWE_VERSION "unknown"
#endif

namespace fs = std::filesystem;

namespace swe::app {

Mesh build_validated_mesh(const SimConfig &c) {
  Mesh mesh = build_mesh(c);
  const ValidationReport rep = validate(mesh);
  if (!rep.ok()) {
    std::string msg = "mesh validation failed:";
    for (const auto &chk : rep.checks)
      if (!chk.passed) msg += " " + chk.name + " (worst " + std::to_string(chk.worst) + " at " + std::to_string(chk.offender) + ")";
    throw MeshValidationError(msg);
  }
  return mesh;
}

DualField relative_pv(const Mesh &mesh, const State &s, const DualField &f) {
  const DualField q = potential_vorticity(mesh, s.V, s.h, f);
  const double hbar = mass(mesh, s.h) / mesh.domain_area();
  DualField out(mesh.num_duals());
  for (std::size_t z = 0; z < mesh.num_duals(); ++z) out[z] = q[z] - f[z] / hbar;
  return out;
}

namespace {

void write_snapshot(const fs::path &dir, const Mesh &mesh, const State &s, const DualField &f) {
  fs::create_directories(dir);
  std::FILE *fc = std::fopen((dir / "cells.csv").c_str(), "w");
  if (!fc) throw ConfigError("cannot write " + (dir / "cells.csv").string());
  std::fputs("id,h\n", fc);
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) std::fprintf(fc, "%zu,%.17g\n", i, s.h[i]);
  std::fclose(fc);
  const DualField q = relative_pv(mesh, s, f);
  std::FILE *fd = std::fopen((dir / "duals.csv").c_str(), "w");
  if (!fd) throw ConfigError("cannot write " + (dir / "duals.csv").string());
  std::fputs("id,q_rel\n", fd);
  for (std::size_t z = 0; z < mesh.num_duals(); ++z) std::fprintf(fd, "%zu,%.17g\n", z, q[z]);
  std::fclose(fd);
}

std::string step_dir(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step_%08ld", step);
  return buf;
}

} // namespace

RunResult cmd_run(const RunArgs &args) {
  SimConfig cfg = args.config_path.empty() ? default_config(parse_case_id(args.case_name)) : load_config(args.config_path);
  // coefficients come from the config (or the case defaults); only the mode changes
  if (args.mode) cfg.diss.mode = *args.mode;
  if (args.t_end_days) cfg.time.t_end = *args.t_end_days * 86400.0;
  if (args.dt) cfg.time.dt = *args.dt;
  validate(cfg.time);

  const Mesh mesh = build_validated_mesh(cfg);
  const CaseSetup setup = build_case(cfg, mesh);
  const Model model(mesh, setup.params, cfg.diss);

  const fs::path out(args.out_dir);
  fs::create_directories(out);
  const std::string ckpt = (out / "checkpoint.bin").string();

  RunStart start;
  start.state = setup.state;
  if (!args.resume.empty()) {
    const Checkpoint c = load_checkpoint(args.resume, mesh);
    start = RunStart{c.state, c.step, c.dt, true, c.baseline};
  }
  const double dt = start.dt > 0.0 ? start.dt : resolve_timestep(cfg.time, mesh, start.state.h, model.params);
  start.dt = dt;

  {
    std::ofstream(out / "config.ini") << dump_config(cfg);
    nlohmann::ordered_json m;
    m["config_path"] = args.config_path;
    m["resolved_config"] = dump_config(cfg);
    m["code_version"] = SWE_VERSION;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(mesh.hash()));
    m["mesh_hash"] = hash;
    m["mesh"] = {{"cells", mesh.num_cells()}, {"edges", mesh.num_edges()}, {"duals", mesh.num_duals()}};
    m["output_dir"] = fs::absolute(out).string();
    m["dt_s"] = dt;
    m["deterministic"] = args.deterministic;
    m["threads"] = args.threads;
    m["resumed_from"] = args.resume;
    std::ofstream(out / "manifest.json") << m.dump(2) << "\n";
  }
  if (args.export_mesh) export_mesh_csv(mesh, (out / "mesh").string());

  DiagnosticsWriter writer((out / "diagnostics.csv").string(), !args.resume.empty());
  RunOptions opts;
  opts.diag_every = cfg.output.diag_every;
  opts.checkpoint_every = cfg.output.checkpoint_every;
  opts.checkpoint_path = ckpt;
  const bool plane = mesh.kind == GeometryKind::PlanePeriodic;
  const long snap = cfg.output.snapshot_every, spec = plane ? cfg.output.spectra_every : 0;
  opts.snapshot_every = std::gcd(snap, spec) > 0 ? 1 : 0;
  opts.on_snapshot = [&](const State &s, long step) {
    if (snap > 0 && step % snap == 0) write_snapshot(out / "snapshots" / step_dir(step), mesh, s, model.f);
    if (spec > 0 && step % spec == 0) {
      fs::create_directories(out / "spectra");
      write_spectrum_csv((out / "spectra" / (step_dir(step) + ".csv")).string(), spectra(mesh, s, model.f, cfg.output.spectra_grid));
    }
  };
  opts.on_record = [&](const DiagnosticsRecord &r) {
    writer.write(r);
    if (!args.quiet) std::fprintf(stderr, "step %ld  t = %.3f d  dH/H = %.3e  dC/C = %.3e  iters %d\n", r.step, r.time / 86400.0,
                                  r.energy_rel_err, r.enstrophy_rel_err, r.fp_iters);
  };
  // the initial snapshot is always written
  if (start.step == 0) write_snapshot(out / "snapshots" / step_dir(0), mesh, start.state, model.f);
  RunResult res = run(model, start, cfg.time, opts);
  if (res.steps > start.step && snap > 0 && res.steps % snap != 0)
    write_snapshot(out / "snapshots" / step_dir(res.steps), mesh, res.state, model.f);
  return res;
}

std::vector<ConvergenceRow> commutator_convergence(MeshKind kind, int levels, int first_sphere_level) {
  std::vector<ConvergenceRow> rows;
  for (int l = 0; l < levels; ++l) {
    SimConfig c = default_config(kind == MeshKind::Sphere ? CaseId::CommutatorSphere : CaseId::CommutatorPlane);
    c.mesh.kind = kind;
    c.mesh.nx = c.mesh.ny = 32 << l;
    c.mesh.level = first_sphere_level + l;
    if (kind == MeshKind::PlaneIrregular) {
      c.mesh.irregular.refinement_factor = 2.0;
      c.mesh.irregular.jitter = 0.0;
    }
    const Mesh mesh = build_validated_mesh(c);
    const CommutatorFields f = commutator_test_fields(mesh);
    const ErrorNorms e = edge_error_norms(mesh, discrete_commutator(mesh, f.U, f.V), f.bracket);
    rows.push_back({static_cast<long>(mesh.num_cells()), e.l2, e.linf});
  }
  return rows;
}

void write_convergence_csv(const std::string &path, const std::vector<ConvergenceRow> &rows) {
  std::FILE *fp = path == "-" ? stdout : std::fopen(path.c_str(), "w");
  if (!fp) throw ConfigError("cannot write " + path);
  std::fputs("N,L2,Linf\n", fp);
  for (const auto &r : rows) std::fprintf(fp, "%ld,%.17g,%.17g\n", r.n, r.l2, r.linf);
  if (fp != stdout) std::fclose(fp);
}

std::vector<EnergyRow> energy_convergence(const SimConfig &cfg, const std::vector<double> &dts) {
  const Mesh mesh = build_validated_mesh(cfg);
  const CaseSetup setup = build_case(cfg, mesh);
  const Model model(mesh, setup.params, {});
  std::vector<EnergyRow> rows;
  for (double dt : dts) {
    TimeConfig t = cfg.time;
    t.dt = dt;
    RunOptions opts;
    opts.diag_every = 0;
    RunStart start;
    start.state = setup.state;
    const RunResult r = run(model, start, t, opts);
    const double h0 = r.baseline.energy;
    rows.push_back({dt, std::abs(energy(mesh, r.state, model.params) - h0) / std::abs(h0)});
  }
  return rows;
}

void write_energy_csv(const std::string &path, const std::vector<EnergyRow> &rows) {
  std::FILE *fp = path == "-" ? stdout : std::fopen(path.c_str(), "w");
  if (!fp) throw ConfigError("cannot write " + path);
  std::fputs("dt_s,energy_rel_err\n", fp);
  for (const auto &r : rows) std::fprintf(fp, "%.17g,%.17g\n", r.dt, r.rel_energy_error);
  if (fp != stdout) std::fclose(fp);
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::nan("");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::log(x[k]), b = std::log(y[k]);
    sx += a, sy += b, sxx += a * a, sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Spectrum cmd_spectra(const std::string &checkpoint, const std::string &config_path, int grid) {
  if (!fs::exists(checkpoint)) throw ConfigError("checkpoint " + checkpoint + " does not exist");
  if (fs::file_size(checkpoint) == 0) throw ConfigError("checkpoint " + checkpoint + " is empty");
  const std::string cfg_path = config_path.empty() ? (fs::path(checkpoint).parent_path() / "config.ini").string() : config_path;
  const SimConfig cfg = load_config(cfg_path);
  const Mesh mesh = build_validated_mesh(cfg);
  const Checkpoint c = load_checkpoint(checkpoint, mesh);
  const CaseSetup setup = build_case(cfg, mesh);
  return spectra(mesh, c.state, coriolis_dual(setup.params, mesh), grid);
}

} // namespace swe::app
