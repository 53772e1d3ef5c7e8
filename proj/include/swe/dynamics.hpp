#pragma once

#include "swe/errors.hpp"
#include "swe/fields.hpp"
#include "swe/mesh.hpp"

/// Conservative tendencies of the discrete momentum and continuity equations:
///   dV/dt = -Adv(V,h) - K(V) - G(h),   dh/dt = -Div(V h̄).
namespace swe {

struct State {
  EdgeField V; // normal velocity, m/s
  CellField h; // fluid depth, m
  double t = 0.0;
};

struct PhysicalParams {
  double g = 9.81;
  /// f-plane value; ignored on the sphere.
  double f0 = 0.0;
  /// Planetary rotation rate used on the sphere, f = 2 Omega sin(latitude).
  double omega = 7.292e-5;
  /// Bottom topography per cell; empty means flat.
  CellField eta_b;
};

/// f_zeta: constant on the plane, 2 Omega sin(latitude) on the sphere.
DualField coriolis_dual(const PhysicalParams &params, const Mesh &mesh);

/// Per edge: -w_{zeta-} S_{zeta-} + w_{zeta+} S_{zeta+}, where S is the
/// kite-weighted depth flux through the four companion edges. Adv is this
/// with w = Curl V + f, divided by h̄|ẽ|.
EdgeField vorticity_flux(const Mesh &mesh, const EdgeField &V, const CellField &h, const DualField &w);

/// Vorticity flux term. Throws NumericalError if any h̄ <= 0.
EdgeField adv_term(const Mesh &mesh, const EdgeField &V, const CellField &h, const DualField &f);

/// 1/2 Grad_n F, F_i = sum_k |ẽ_ik||e_ik| V_ik^2 / (2 Omega_ii).
EdgeField kinetic_term(const Mesh &mesh, const EdgeField &V);
/// Per-cell kinetic energy density F_i used by kinetic_term.
CellField kinetic_density(const Mesh &mesh, const EdgeField &V);

/// g Grad_n(h + eta_b); an empty eta_b is treated as zero.
EdgeField gradient_term(const Mesh &mesh, const CellField &h, const CellField &eta_b, double g);

/// dh/dt = -Div(V h̄).
CellField continuity_flux(const Mesh &mesh, const EdgeField &V, const CellField &h);

/// q_zeta = (Curl V + f)_zeta / h_zeta with kite-weighted h_zeta.
/// Throws NumericalError if any h_zeta <= 0.
DualField potential_vorticity(const Mesh &mesh, const EdgeField &V, const CellField &h, const DualField &f);

/// Throws NumericalError naming the first offending cell if h is not
/// strictly positive and finite.
void require_positive_depth(const CellField &h);

} // namespace swe
