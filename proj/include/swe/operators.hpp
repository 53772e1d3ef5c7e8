#pragma once

#include <functional>
#include <vector>

#include "swe/fields.hpp"
#include "swe/mesh.hpp"

/// Discrete calculus on the primal triangles and their circumcenter dual.
///
/// Sign conventions (see Edge): edge values are normal components along the
/// T_i -> T_j normal; Grad_t differentiates along tangent = up x normal;
/// Curl circulates counterclockwise about the local vertical. With these,
///   ip_edge(grad_n F, V) = -ip_cell(F, div V)
///   ip_edge(grad_t G, V) = +ip_dual(G, curl V)
/// hold to round-off on any mesh.
namespace swe::ops {

/// (F_j - F_i) / |ẽ_ij|
EdgeField grad_n(const Mesh &mesh, const CellField &f);
/// (G_{zeta-} - G_{zeta+}) / |e_ij|
EdgeField grad_t(const Mesh &mesh, const DualField &g);
/// (1/Omega_ii) sum_k |e_ik| V_ik, V_ik outward from T_i
CellField div(const Mesh &mesh, const EdgeField &v);
/// (1/|zeta|) sum |ẽ| V, counterclockwise about k_zeta
DualField curl(const Mesh &mesh, const EdgeField &v);

/// h̄_ij = (h_i + h_j) / 2
EdgeField edge_average(const Mesh &mesh, const CellField &h);
/// Mean of the two adjacent cell values; same as edge_average but named for
/// its use on derived quantities such as divergences.
inline EdgeField cell_mean_on_edges(const Mesh &mesh, const CellField &f) { return edge_average(mesh, f); }
/// Kite-weighted interpolation to dual cells, sum_i |zeta ∩ T_i|/|zeta| F_i.
DualField cell_to_dual(const Mesh &mesh, const CellField &f);

/// Perot reconstruction u_i = (1/Omega_ii) sum_k |e_ik| (x_e - x_T) V_ik;
/// on the sphere the result is projected onto the tangent plane at x_T.
std::vector<Vec3> reconstruct_cell(const Mesh &mesh, const EdgeField &v);
/// u_zeta = sum_i |zeta ∩ T_i|/|zeta| u_i, projected onto the tangent plane.
std::vector<Vec3> reconstruct_dual(const Mesh &mesh, const EdgeField &v);

/// One-form values A♭_ij = -|ẽ_ij| V_ij of the adjacent-cell flat operator.
EdgeField flat(const Mesh &mesh, const EdgeField &v);

double ip_edge(const Mesh &mesh, const EdgeField &a, const EdgeField &b);
double ip_cell(const Mesh &mesh, const CellField &f, const CellField &g);
double ip_dual(const Mesh &mesh, const DualField &p, const DualField &q);

/// V_ij = u(x_e) . n_ij sampled at edge midpoints.
EdgeField sample_normal(const Mesh &mesh, const std::function<Vec3(const Vec3 &)> &u);
CellField sample_cells(const Mesh &mesh, const std::function<double(const Vec3 &)> &f);
DualField sample_duals(const Mesh &mesh, const std::function<double(const Vec3 &)> &f);

} // namespace swe::ops
