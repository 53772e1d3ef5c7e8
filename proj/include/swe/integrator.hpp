#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "swe/diagnostics.hpp"
#include "swe/dissipation.hpp"

/// Time stepping: Cayley update for the depth, Crank-Nicolson fixed point
/// for the velocity.
namespace swe {

struct TimeConfig {
  double dt = 0.0;  // s; 0 selects the CFL-based default
  double cfl = 0.2; // used when dt == 0
  double t_end = 0.0;
  double fp_tol = 1e-12; // max-norm of successive iterates, m/s
  int fp_max_iter = 50;
  double lin_tol = 1e-14; // relative residual of the continuity solve
};

/// Throws ConfigError when the configuration violates dt >= 0, cfl > 0,
/// fp_tol > 0, fp_max_iter >= 1, lin_tol > 0.
void validate(const TimeConfig &cfg);

/// C min|ẽ| / sqrt(g max(h + eta_b)).
double cfl_timestep(const Mesh &mesh, const CellField &h, const PhysicalParams &params, double cfl);

/// dt from the config, or the CFL value for the given depth.
double resolve_timestep(const TimeConfig &cfg, const Mesh &mesh, const CellField &h, const PhysicalParams &params);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// B with (B h)_i = -Div(V h̄)_i, so that 1^T Omega B = 0.
SparseMatrix assemble_advection_generator(const Mesh &mesh, const EdgeField &V);

/// Solves (I - dt/2 B) h1 = (I + dt/2 B) h0. Throws NumericalError if the
/// solver does not reach `lin_tol`.
CellField continuity_step(const CellField &h0, const SparseMatrix &B, double dt, double lin_tol = 1e-14);

/// Everything the tendencies need besides the state.
struct Model {
  const Mesh &mesh;
  PhysicalParams params;
  DualField f;
  DissipationConfig diss;

  Model(const Mesh &m, PhysicalParams p, DissipationConfig d);
};

struct MomentumResult {
  EdgeField V;
  int iterations = 0;
};

/// Fixed-point iteration for V^{t+1} given both depth levels. Throws
/// NumericalError when it does not converge within cfg.fp_max_iter or
/// produces non-finite values.
MomentumResult momentum_fixed_point(const Model &model, const EdgeField &V0, const CellField &h0, const CellField &h1,
                                    double dt, const TimeConfig &cfg);

struct StepResult {
  State state;
  int fp_iters = 0;
};

/// One step of length dt: continuity first, then momentum.
StepResult step(const Model &model, const State &s, double dt, const TimeConfig &cfg);

struct RunOptions {
  long diag_every = 1;       // steps between diagnostics records; <= 0 disables them
  long checkpoint_every = 0; // 0: only the final checkpoint
  std::string checkpoint_path; // empty: no checkpoints
  long snapshot_every = 0;   // 0: no snapshots
  std::function<void(const DiagnosticsRecord &)> on_record;
  std::function<void(const State &, long step)> on_snapshot;
};

/// Where a run starts; a resumed run carries over the step counter, dt and
/// the t = 0 reference values.
struct RunStart {
  State state;
  long step = 0;
  double dt = 0.0; // 0: resolve from the config and the initial state
  bool has_baseline = false;
  DiagnosticsBaseline baseline;
};

struct RunResult {
  State state;
  long steps = 0;
  double dt = 0.0;
  DiagnosticsBaseline baseline;
  std::vector<DiagnosticsRecord> records;
};

/// Advances until cfg.t_end; the last step is shortened to land on t_end.
RunResult run(const Model &model, const RunStart &start, const TimeConfig &cfg, const RunOptions &opts = {});

struct Checkpoint {
  std::uint64_t mesh_hash = 0;
  long step = 0;
  double dt = 0.0;
  DiagnosticsBaseline baseline;
  State state;
};

/// Binary little-endian checkpoint: "SWECKPT1" magic, format version, mesh
/// hash, step, t, dt, reference energy/enstrophy/mass, then V and h.
void save_checkpoint(const std::string &path, const Mesh &mesh, const Checkpoint &c);
/// Throws ConfigError on a malformed file or a mesh mismatch.
Checkpoint load_checkpoint(const std::string &path, const Mesh &mesh);

} // namespace swe
