#pragma once

#include "swe/dynamics.hpp"

/// Potential-enstrophy (Casimir) dissipation and the biharmonic baseline.
namespace swe {

enum class DissipationMode { None, Casimir, Biharmonic };

struct DissipationConfig {
  DissipationMode mode = DissipationMode::None;
  double theta = 0.0; // Casimir coefficient, SI (m^4 s)
  double nu = 0.0;    // biharmonic coefficient, SI (m^4/s)
};

/// Edge representative of the enstrophy gradient, D̃ = 2 Grad_t q / h̄.
/// Throws NumericalError if any h̄ <= 0.
EdgeField casimir_gradient(const Mesh &mesh, const DualField &q, const CellField &h);

/// Normal components of the Lie bracket [u, v] = u div v - v div u - curl(u x v):
///   U avg(Div V) - V avg(Div U) - Grad_t((u_zeta x v_zeta) . k_zeta).
EdgeField discrete_commutator(const Mesh &mesh, const EdgeField &U, const EdgeField &V);

/// Projected Lie derivative P(L_A(h W♭)) for the velocity V and the one-form
/// W♭ of W_ij = |e| W̃_ij / (2 Omega_ii). Satisfies sum_e |e| L V = 0 for
/// every W̃.
EdgeField lie_projection(const Mesh &mesh, const EdgeField &V, const CellField &h, const EdgeField &Wt);

/// -theta P(L_A(h [δC/δM, A]♭)) / (h̄ |ẽ|) with δC/δM represented by D̃.
/// The commutator is taken with the current V, D̃ may be frozen from an
/// earlier time level.
EdgeField casimir_tendency_with_gradient(const Mesh &mesh, const EdgeField &V, const CellField &h, const EdgeField &D,
                                         double theta);

/// casimir_tendency_with_gradient with D̃ evaluated from (V, h, f).
EdgeField casimir_tendency(const Mesh &mesh, const EdgeField &V, const CellField &h, const DualField &f, double theta);

/// Grad_n(Div V) - Grad_t(Curl V).
EdgeField vector_laplacian(const Mesh &mesh, const EdgeField &V);

/// -nu lap(lap V).
EdgeField biharmonic_tendency(const Mesh &mesh, const EdgeField &V, double nu);

} // namespace swe
