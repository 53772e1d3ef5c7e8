#include "swe/dissipation.hpp"

#include <string>

#include "swe/operators.hpp"

namespace swe {

namespace {

double edge_mean(const Mesh &mesh, const CellField &f, std::size_t e) {
  return 0.5 * (f[mesh.edges[e].cells[0]] + f[mesh.edges[e].cells[1]]);
}

} // namespace

EdgeField casimir_gradient(const Mesh &mesh, const DualField &q, const CellField &h) {
  const EdgeField hbar = ops::edge_average(mesh, h);
  EdgeField d = ops::grad_t(mesh, q);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    if (!(hbar[e] > 0.0)) throw NumericalError("non-positive edge depth on edge " + std::to_string(e));
    d[e] *= 2.0 / hbar[e];
  }
  return d;
}

EdgeField discrete_commutator(const Mesh &mesh, const EdgeField &U, const EdgeField &V) {
  const CellField div_u = ops::div(mesh, U), div_v = ops::div(mesh, V);
  const std::vector<Vec3> u = ops::reconstruct_dual(mesh, U), v = ops::reconstruct_dual(mesh, V);
  DualField c(mesh.num_duals());
  for (std::size_t z = 0; z < mesh.num_duals(); ++z) c[z] = u[z].cross(v[z]).dot(mesh.duals[z].up);
  EdgeField w = ops::grad_t(mesh, c);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e)
    w[e] = U[e] * edge_mean(mesh, div_v, e) - V[e] * edge_mean(mesh, div_u, e) - w[e];
  return w;
}

EdgeField lie_projection(const Mesh &mesh, const EdgeField &V, const CellField &h, const EdgeField &Wt) {
  EdgeField out = vorticity_flux(mesh, V, h, ops::curl(mesh, Wt));

  // sum_k |e||ẽ| V W̃ / Omega over the three edges of each cell
  CellField cell_sum(mesh.num_cells());
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    const Cell &c = mesh.cells[i];
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      const int e = c.edges[k];
      s += mesh.edges[e].length * mesh.edges[e].dual_length * V[e] * Wt[e];
    }
    cell_sum[i] = s / c.area;
  }
  const EdgeField hbar = ops::edge_average(mesh, h);
  EdgeField mass_flux(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) mass_flux[e] = V[e] * hbar[e];
  const CellField div_flux = ops::div(mesh, mass_flux);

  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge &ed = mesh.edges[e];
    out[e] += -0.5 * hbar[e] * (cell_sum[ed.cells[0]] - cell_sum[ed.cells[1]]) +
              edge_mean(mesh, div_flux, e) * ed.dual_length * Wt[e];
  }
  return out;
}

EdgeField casimir_tendency_with_gradient(const Mesh &mesh, const EdgeField &V, const CellField &h, const EdgeField &D,
                                         double theta) {
  if (theta == 0.0) return EdgeField(mesh.num_edges(), 0.0);
  const EdgeField wt = discrete_commutator(mesh, D, V);
  EdgeField out = lie_projection(mesh, V, h, wt);
  const EdgeField hbar = ops::edge_average(mesh, h);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) out[e] *= -theta / (hbar[e] * mesh.edges[e].dual_length);
  return out;
}

EdgeField casimir_tendency(const Mesh &mesh, const EdgeField &V, const CellField &h, const DualField &f, double theta) {
  if (theta == 0.0) return EdgeField(mesh.num_edges(), 0.0);
  const EdgeField d = casimir_gradient(mesh, potential_vorticity(mesh, V, h, f), h);
  return casimir_tendency_with_gradient(mesh, V, h, d, theta);
}

EdgeField vector_laplacian(const Mesh &mesh, const EdgeField &V) {
  return ops::grad_n(mesh, ops::div(mesh, V)) - ops::grad_t(mesh, ops::curl(mesh, V));
}

EdgeField biharmonic_tendency(const Mesh &mesh, const EdgeField &V, double nu) {
  EdgeField out = vector_laplacian(mesh, vector_laplacian(mesh, V));
  out *= -nu;
  return out;
}

} // namespace swe
