#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "swe/dynamics.hpp"

namespace swe {

struct DiagnosticsRecord {
  long step = 0;
  double time = 0.0;
  double energy = 0.0;
  double enstrophy = 0.0;
  double mass = 0.0;
  double energy_rel_err = 0.0;
  double enstrophy_rel_err = 0.0;
  double mass_rel_err = 0.0;
  int fp_iters = 0;
};

/// Reference values the relative errors are measured against (t = 0).
struct DiagnosticsBaseline {
  double energy = 0.0;
  double enstrophy = 0.0;
  double mass = 0.0;
};

/// H = sum_i (g/2)(h_i + eta_i)^2 Omega_ii + (1/2) h_i sum_k |e_ik||ẽ_ik| V_ik^2 / 2.
double energy(const Mesh &mesh, const State &state, const PhysicalParams &params);
/// Kinetic part of `energy` alone.
double kinetic_energy(const Mesh &mesh, const State &state);
/// C = 1/2 sum_zeta (Curl V + f)^2 / h_zeta |zeta|.
double enstrophy(const Mesh &mesh, const State &state, const DualField &f);
/// sum_i Omega_ii h_i
double mass(const Mesh &mesh, const CellField &h);

DiagnosticsBaseline make_baseline(const Mesh &mesh, const State &state, const PhysicalParams &params, const DualField &f);
DiagnosticsRecord make_record(const Mesh &mesh, const State &state, const PhysicalParams &params, const DualField &f,
                              const DiagnosticsBaseline &base, long step, int fp_iters);

/// (x_k - x_0) / |x_0|; zero series when x_0 = 0.
std::vector<double> relative_error_series(const std::vector<double> &values);

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};
/// Relative L2 (area-weighted by |e||ẽ|/2) and L-infinity errors on edges.
ErrorNorms edge_error_norms(const Mesh &mesh, const EdgeField &numeric, const EdgeField &reference);

struct Spectrum {
  std::vector<double> k; // shell-centre wavenumber, rad/m
  std::vector<double> ke_density;
  std::vector<double> enstrophy_density;
};

/// Isotropic spectra of sqrt(h) u and sqrt(h) q on the periodic plane.
/// Cell values are sampled on a uniform n x n grid by nearest circumcenter,
/// transformed with a 2D DFT and summed over annular shells of width
/// 2 pi / max(Lx, Ly). Normalised so that sum_k ke_density equals the grid
/// mean of |sqrt(h) u|^2 / 2 (and likewise for enstrophy).
Spectrum spectra(const Mesh &mesh, const State &state, const DualField &f, int grid_n);

/// Streaming writer for diagnostics.csv.
class DiagnosticsWriter {
public:
  explicit DiagnosticsWriter(const std::string &path, bool append = false);
  ~DiagnosticsWriter();
  DiagnosticsWriter(const DiagnosticsWriter &) = delete;
  DiagnosticsWriter &operator=(const DiagnosticsWriter &) = delete;
  void write(const DiagnosticsRecord &r);

private:
  std::FILE *file_ = nullptr;
};

/// Write `k,ke_density,enstrophy_density` rows to `path`.
void write_spectrum_csv(const std::string &path, const Spectrum &s);

} // namespace swe
