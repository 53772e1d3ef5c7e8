#include "swe/integrator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <Eigen/IterativeLinearSolvers>

#include "swe/errors.hpp"
#include "swe/operators.hpp"

namespace swe {

void validate(const TimeConfig &cfg) {
  if (!(cfg.dt >= 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("time step must be >= 0 (0 selects the CFL default)");
  if (cfg.dt == 0.0 && !(cfg.cfl > 0.0)) throw ConfigError("cfl must be > 0");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be >= 0");
  if (!(cfg.fp_tol > 0.0)) throw ConfigError("fixed-point tolerance must be > 0");
  if (cfg.fp_max_iter < 1) throw ConfigError("fixed-point iteration limit must be >= 1");
  if (!(cfg.lin_tol > 0.0)) throw ConfigError("linear solver tolerance must be > 0");
}

double cfl_timestep(const Mesh &mesh, const CellField &h, const PhysicalParams &params, double cfl) {
  double de = mesh.edges.at(0).dual_length;
  for (const Edge &e : mesh.edges) de = std::min(de, e.dual_length);
  double hmax = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) hmax = std::max(hmax, h[i] + (params.eta_b.empty() ? 0.0 : params.eta_b[i]));
  if (!(hmax > 0.0)) throw NumericalError("cannot derive a CFL time step from a non-positive surface height");
  return cfl * de / std::sqrt(params.g * hmax);
}

double resolve_timestep(const TimeConfig &cfg, const Mesh &mesh, const CellField &h, const PhysicalParams &params) {
  return cfg.dt > 0.0 ? cfg.dt : cfl_timestep(mesh, h, params, cfg.cfl);
}

SparseMatrix assemble_advection_generator(const Mesh &mesh, const EdgeField &V) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * mesh.num_cells());
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    const Cell &c = mesh.cells[i];
    const double scale = -1.0 / (2.0 * c.area);
    double diag = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double flux = mesh.edges[c.edges[k]].length * c.edge_sign[k] * V[c.edges[k]];
      diag += flux;
      trip.emplace_back(static_cast<int>(i), c.neighbors[k], scale * flux);
    }
    trip.emplace_back(static_cast<int>(i), static_cast<int>(i), scale * diag);
  }
  SparseMatrix b(static_cast<Eigen::Index>(mesh.num_cells()), static_cast<Eigen::Index>(mesh.num_cells()));
  b.setFromTriplets(trip.begin(), trip.end());
  b.prune(0.0);
  return b;
}

CellField continuity_step(const CellField &h0, const SparseMatrix &B, double dt, double lin_tol) {
  const Eigen::Index n = B.rows();
  const Eigen::Map<const Eigen::VectorXd> x0(h0.data(), n);
  SparseMatrix id(n, n);
  id.setIdentity();
  const SparseMatrix lhs = id - 0.5 * dt * B;
  const Eigen::VectorXd rhs = x0 + 0.5 * dt * (B * x0);
  CellField h1(static_cast<std::size_t>(n));
  Eigen::Map<Eigen::VectorXd> x1(h1.data(), n);
  if (B.nonZeros() == 0) {
    x1 = rhs;
    return h1;
  }
  Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> solver;
  solver.setTolerance(lin_tol);
  solver.setMaxIterations(std::max<Eigen::Index>(200, 2 * n));
  solver.compute(lhs);
  x1 = solver.solveWithGuess(rhs, x0);
  const double res = (rhs - lhs * x1).norm() / rhs.norm();
  // BiCGSTAB can stop a hair above the target on round-off; accept up to 10x
  if (solver.info() != Eigen::Success && !(res <= 10.0 * lin_tol))
    throw NumericalError("continuity solve did not converge (relative residual " + std::to_string(res) + ")");
  if (!x1.allFinite()) throw NumericalError("continuity solve produced non-finite depth");
  return h1;
}

Model::Model(const Mesh &m, PhysicalParams p, DissipationConfig d)
    : mesh(m), params(std::move(p)), f(coriolis_dual(params, m)), diss(d) {}

namespace {

/// -Adv - K plus the dissipation tendency; D is the frozen enstrophy gradient.
EdgeField half_rhs(const Model &m, const EdgeField &V, const CellField &h, const EdgeField &D) {
  EdgeField r = adv_term(m.mesh, V, h, m.f);
  r += kinetic_term(m.mesh, V);
  r *= -1.0;
  switch (m.diss.mode) {
  case DissipationMode::Casimir:
    if (m.diss.theta != 0.0) r += casimir_tendency_with_gradient(m.mesh, V, h, D, m.diss.theta);
    break;
  case DissipationMode::Biharmonic:
    if (m.diss.nu != 0.0) r += biharmonic_tendency(m.mesh, V, m.diss.nu);
    break;
  case DissipationMode::None:
    break;
  }
  return r;
}

} // namespace

MomentumResult momentum_fixed_point(const Model &model, const EdgeField &V0, const CellField &h0, const CellField &h1,
                                    double dt, const TimeConfig &cfg) {
  require_positive_depth(h0);
  require_positive_depth(h1);
  EdgeField D;
  if (model.diss.mode == DissipationMode::Casimir && model.diss.theta != 0.0)
    D = casimir_gradient(model.mesh, potential_vorticity(model.mesh, V0, h0, model.f), h0);

  // V0 + dt (rhs(V0, h0)/2 - G(h1)) is fixed across the iteration
  EdgeField base = half_rhs(model, V0, h0, D);
  base *= 0.5;
  base -= gradient_term(model.mesh, h1, model.params.eta_b, model.params.g);
  base *= dt;
  base += V0;

  MomentumResult res;
  EdgeField cur = V0;
  for (int k = 1; k <= cfg.fp_max_iter; ++k) {
    EdgeField next = half_rhs(model, cur, h1, D);
    next *= 0.5 * dt;
    next += base;
    double diff = 0.0;
    for (std::size_t e = 0; e < next.size(); ++e) {
      if (!std::isfinite(next[e])) throw NumericalError("momentum iteration produced a non-finite velocity");
      diff = std::max(diff, std::abs(next[e] - cur[e]));
    }
    cur = std::move(next);
    if (diff < cfg.fp_tol) {
      res.V = std::move(cur);
      res.iterations = k;
      return res;
    }
  }
  throw NumericalError("momentum fixed point did not converge in " + std::to_string(cfg.fp_max_iter) + " iterations");
}

StepResult step(const Model &model, const State &s, double dt, const TimeConfig &cfg) {
  const SparseMatrix b = assemble_advection_generator(model.mesh, s.V);
  StepResult out;
  out.state.h = continuity_step(s.h, b, dt, cfg.lin_tol);
  require_positive_depth(out.state.h);
  MomentumResult m = momentum_fixed_point(model, s.V, s.h, out.state.h, dt, cfg);
  out.state.V = std::move(m.V);
  out.state.t = s.t + dt;
  out.fp_iters = m.iterations;
  return out;
}

RunResult run(const Model &model, const RunStart &start, const TimeConfig &cfg, const RunOptions &opts) {
  validate(cfg);
  RunResult r;
  r.state = start.state;
  r.steps = start.step;
  r.dt = start.dt > 0.0 ? start.dt : resolve_timestep(cfg, model.mesh, start.state.h, model.params);
  r.baseline = start.has_baseline ? start.baseline : make_baseline(model.mesh, start.state, model.params, model.f);

  auto record = [&](int iters) {
    const DiagnosticsRecord rec = make_record(model.mesh, r.state, model.params, model.f, r.baseline, r.steps, iters);
    r.records.push_back(rec);
    if (opts.on_record) opts.on_record(rec);
  };
  auto checkpoint = [&] {
    if (opts.checkpoint_path.empty()) return;
    save_checkpoint(opts.checkpoint_path, model.mesh, Checkpoint{model.mesh.hash(), r.steps, r.dt, r.baseline, r.state});
  };

  if (start.step == 0) {
    if (opts.diag_every > 0) record(0);
    if (opts.snapshot_every > 0 && opts.on_snapshot) opts.on_snapshot(r.state, 0);
  }
  // stop once the remaining interval is a round-off sliver of dt
  while (cfg.t_end - r.state.t > 1e-9 * r.dt) {
    const double dt = std::min(r.dt, cfg.t_end - r.state.t);
    StepResult s;
    try {
      s = step(model, r.state, dt, cfg);
    } catch (const NumericalError &) {
      checkpoint(); // keep the last good state
      throw;
    }
    r.state = std::move(s.state);
    ++r.steps;
    if (opts.diag_every > 0 && r.steps % opts.diag_every == 0) record(s.fp_iters);
    if (opts.snapshot_every > 0 && opts.on_snapshot && r.steps % opts.snapshot_every == 0) opts.on_snapshot(r.state, r.steps);
    if (opts.checkpoint_every > 0 && r.steps % opts.checkpoint_every == 0) checkpoint();
  }
  checkpoint();
  return r;
}

namespace {

constexpr char kMagic[8] = {'S', 'W', 'E', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;
static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <class T> void put(std::ofstream &out, T v) {
  out.write(reinterpret_cast<const char *>(&v), sizeof v);
}

template <class T> T get(std::ifstream &in) {
  T v{};
  in.read(reinterpret_cast<char *>(&v), sizeof v);
  if (!in) throw ConfigError("checkpoint file is truncated");
  return v;
}

} // namespace

void save_checkpoint(const std::string &path, const Mesh &mesh, const Checkpoint &c) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + tmp + " for writing");
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kVersion);
    put<std::uint64_t>(out, mesh.hash());
    put<std::int64_t>(out, c.step);
    put<double>(out, c.state.t);
    put<double>(out, c.dt);
    put<double>(out, c.baseline.energy);
    put<double>(out, c.baseline.enstrophy);
    put<double>(out, c.baseline.mass);
    put<std::uint64_t>(out, c.state.V.size());
    put<std::uint64_t>(out, c.state.h.size());
    for (double v : c.state.V) put<double>(out, v);
    for (double v : c.state.h) put<double>(out, v);
    if (!out) throw ConfigError("failed writing " + tmp);
  }
  std::rename(tmp.c_str(), path.c_str());
}

Checkpoint load_checkpoint(const std::string &path, const Mesh &mesh) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ConfigError(path + " is not a checkpoint file");
  if (get<std::uint32_t>(in) != kVersion) throw ConfigError("unsupported checkpoint version in " + path);
  Checkpoint c;
  c.mesh_hash = get<std::uint64_t>(in);
  if (c.mesh_hash != mesh.hash()) throw ConfigError("checkpoint " + path + " was written for a different mesh");
  c.step = static_cast<long>(get<std::int64_t>(in));
  c.state.t = get<double>(in);
  c.dt = get<double>(in);
  c.baseline.energy = get<double>(in);
  c.baseline.enstrophy = get<double>(in);
  c.baseline.mass = get<double>(in);
  const auto ne = get<std::uint64_t>(in), nc = get<std::uint64_t>(in);
  if (ne != mesh.num_edges() || nc != mesh.num_cells()) throw ConfigError("checkpoint field sizes do not match the mesh");
  c.state.V = EdgeField(ne);
  c.state.h = CellField(nc);
  for (std::size_t e = 0; e < ne; ++e) c.state.V[e] = get<double>(in);
  for (std::size_t i = 0; i < nc; ++i) c.state.h[i] = get<double>(in);
  return c;
}

} // namespace swe
