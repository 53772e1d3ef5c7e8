#include "swe/dynamics.hpp"

#include <cmath>
#include <string>

#include "swe/operators.hpp"

namespace swe {

namespace {

// Companion flux of edge (i,j) at one dual vertex. The companion of T_i is
// weighted with the mean depth of T_j and the cell across the companion
// (h̄_{j i-}), and symmetrically for T_j; V is taken outward from its owner.
double companion_flux(const Mesh &mesh, const Edge &ed, const std::array<Companion, 2> &side, const EdgeField &V,
                      const CellField &h) {
  double s = 0.0;
  for (int q = 0; q < 2; ++q) {
    const Companion &c = side[q];
    const Edge &ce = mesh.edges[c.edge];
    const int own = ed.cells[q], other = ed.cells[1 - q];
    const int across = ce.cells[0] == own ? ce.cells[1] : ce.cells[0];
    s += c.weight * 0.5 * (h[other] + h[across]) * ce.length * c.sign * V[c.edge];
  }
  return s;
}

} // namespace

void require_positive_depth(const CellField &h) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (!(h[i] > 0.0) || !std::isfinite(h[i]))
      throw NumericalError("non-positive or non-finite depth " + std::to_string(h[i]) + " in cell " + std::to_string(i));
}

DualField coriolis_dual(const PhysicalParams &params, const Mesh &mesh) {
  DualField f(mesh.num_duals(), params.f0);
  if (mesh.kind == GeometryKind::Sphere)
    for (std::size_t z = 0; z < mesh.num_duals(); ++z) f[z] = 2.0 * params.omega * mesh.duals[z].up.z();
  return f;
}

EdgeField vorticity_flux(const Mesh &mesh, const EdgeField &V, const CellField &h, const DualField &w) {
  EdgeField out(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge &ed = mesh.edges[e];
    out[e] = -w[ed.vertex_minus] * companion_flux(mesh, ed, ed.minus_side, V, h) +
             w[ed.vertex_plus] * companion_flux(mesh, ed, ed.plus_side, V, h);
  }
  return out;
}

EdgeField adv_term(const Mesh &mesh, const EdgeField &V, const CellField &h, const DualField &f) {
  const EdgeField hbar = ops::edge_average(mesh, h);
  DualField absolute = ops::curl(mesh, V);
  absolute += f;
  EdgeField out = vorticity_flux(mesh, V, h, absolute);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    if (!(hbar[e] > 0.0)) throw NumericalError("non-positive edge depth on edge " + std::to_string(e));
    out[e] /= hbar[e] * mesh.edges[e].dual_length;
  }
  return out;
}

CellField kinetic_density(const Mesh &mesh, const EdgeField &V) {
  CellField F(mesh.num_cells());
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    const Cell &c = mesh.cells[i];
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Edge &ed = mesh.edges[c.edges[k]];
      s += ed.dual_length * ed.length * V[c.edges[k]] * V[c.edges[k]];
    }
    F[i] = s / (2.0 * c.area);
  }
  return F;
}

EdgeField kinetic_term(const Mesh &mesh, const EdgeField &V) {
  EdgeField k = ops::grad_n(mesh, kinetic_density(mesh, V));
  k *= 0.5;
  return k;
}

EdgeField gradient_term(const Mesh &mesh, const CellField &h, const CellField &eta_b, double g) {
  CellField surface = h;
  if (eta_b.size() == h.size()) surface += eta_b;
  EdgeField out = ops::grad_n(mesh, surface);
  out *= g;
  return out;
}

CellField continuity_flux(const Mesh &mesh, const EdgeField &V, const CellField &h) {
  const EdgeField hbar = ops::edge_average(mesh, h);
  EdgeField flux(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) flux[e] = V[e] * hbar[e];
  CellField out = ops::div(mesh, flux);
  out *= -1.0;
  return out;
}

DualField potential_vorticity(const Mesh &mesh, const EdgeField &V, const CellField &h, const DualField &f) {
  const DualField curl = ops::curl(mesh, V);
  const DualField hz = ops::cell_to_dual(mesh, h);
  DualField q(mesh.num_duals());
  for (std::size_t z = 0; z < mesh.num_duals(); ++z) {
    if (!(hz[z] > 0.0)) throw NumericalError("non-positive dual depth at vertex " + std::to_string(z));
    q[z] = (curl[z] + f[z]) / hz[z];
  }
  return q;
}

} // namespace swe
