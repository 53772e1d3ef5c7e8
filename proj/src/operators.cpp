#include "swe/operators.hpp"

namespace swe::ops {

EdgeField grad_n(const Mesh &mesh, const CellField &f) {
  EdgeField out(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge &ed = mesh.edges[e];
    out[e] = (f[ed.cells[1]] - f[ed.cells[0]]) / ed.dual_length;
  }
  return out;
}

EdgeField grad_t(const Mesh &mesh, const DualField &g) {
  EdgeField out(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge &ed = mesh.edges[e];
    out[e] = (g[ed.vertex_minus] - g[ed.vertex_plus]) / ed.length;
  }
  return out;
}

CellField div(const Mesh &mesh, const EdgeField &v) {
  CellField out(mesh.num_cells());
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    const Cell &c = mesh.cells[i];
    double flux = 0.0;
    for (int k = 0; k < 3; ++k) flux += mesh.edges[c.edges[k]].length * c.edge_sign[k] * v[c.edges[k]];
    out[i] = flux / c.area;
  }
  return out;
}

DualField curl(const Mesh &mesh, const EdgeField &v) {
  DualField out(mesh.num_duals());
  for (std::size_t z = 0; z < mesh.num_duals(); ++z) {
    const DualCell &d = mesh.duals[z];
    double circ = 0.0;
    for (std::size_t k = 0; k < d.edges.size(); ++k) circ += d.edge_sign[k] * mesh.edges[d.edges[k]].dual_length * v[d.edges[k]];
    out[z] = circ / d.area;
  }
  return out;
}

EdgeField edge_average(const Mesh &mesh, const CellField &h) {
  EdgeField out(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge &ed = mesh.edges[e];
    out[e] = 0.5 * (h[ed.cells[0]] + h[ed.cells[1]]);
  }
  return out;
}

DualField cell_to_dual(const Mesh &mesh, const CellField &f) {
  DualField out(mesh.num_duals());
  for (std::size_t z = 0; z < mesh.num_duals(); ++z) {
    const DualCell &d = mesh.duals[z];
    double s = 0.0;
    for (std::size_t k = 0; k < d.cells.size(); ++k) s += d.kites[k] * f[d.cells[k]];
    out[z] = s / d.area;
  }
  return out;
}

std::vector<Vec3> reconstruct_cell(const Mesh &mesh, const EdgeField &v) {
  const bool sphere = mesh.kind == GeometryKind::Sphere;
  std::vector<Vec3> out(mesh.num_cells());
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    const Cell &c = mesh.cells[i];
    Vec3 u = Vec3::Zero();
    for (int k = 0; k < 3; ++k) u += mesh.edges[c.edges[k]].length * c.edge_sign[k] * v[c.edges[k]] * c.edge_offset[k];
    u /= c.area;
    if (sphere) {
      const Vec3 up = c.center.normalized();
      u -= u.dot(up) * up;
    }
    out[i] = u;
  }
  return out;
}

std::vector<Vec3> reconstruct_dual(const Mesh &mesh, const EdgeField &v) {
  const std::vector<Vec3> cell = reconstruct_cell(mesh, v);
  const bool sphere = mesh.kind == GeometryKind::Sphere;
  std::vector<Vec3> out(mesh.num_duals());
  for (std::size_t z = 0; z < mesh.num_duals(); ++z) {
    const DualCell &d = mesh.duals[z];
    Vec3 u = Vec3::Zero();
    for (std::size_t k = 0; k < d.cells.size(); ++k) u += d.kites[k] * cell[d.cells[k]];
    u /= d.area;
    if (sphere) u -= u.dot(d.up) * d.up;
    out[z] = u;
  }
  return out;
}

EdgeField flat(const Mesh &mesh, const EdgeField &v) {
  EdgeField out(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) out[e] = -mesh.edges[e].dual_length * v[e];
  return out;
}

double ip_edge(const Mesh &mesh, const EdgeField &a, const EdgeField &b) {
  double s = 0.0;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) s += mesh.edges[e].length * mesh.edges[e].dual_length * a[e] * b[e];
  return s;
}

double ip_cell(const Mesh &mesh, const CellField &f, const CellField &g) {
  double s = 0.0;
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) s += mesh.cells[i].area * f[i] * g[i];
  return s;
}

double ip_dual(const Mesh &mesh, const DualField &p, const DualField &q) {
  double s = 0.0;
  for (std::size_t z = 0; z < mesh.num_duals(); ++z) s += mesh.duals[z].area * p[z] * q[z];
  return s;
}

EdgeField sample_normal(const Mesh &mesh, const std::function<Vec3(const Vec3 &)> &u) {
  EdgeField out(mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) out[e] = u(mesh.edges[e].midpoint).dot(mesh.edges[e].normal);
  return out;
}

CellField sample_cells(const Mesh &mesh, const std::function<double(const Vec3 &)> &f) {
  CellField out(mesh.num_cells());
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) out[i] = f(mesh.cells[i].center);
  return out;
}

DualField sample_duals(const Mesh &mesh, const std::function<double(const Vec3 &)> &f) {
  DualField out(mesh.num_duals());
  for (std::size_t z = 0; z < mesh.num_duals(); ++z) out[z] = f(mesh.duals[z].position);
  return out;
}

} // namespace swe::ops
