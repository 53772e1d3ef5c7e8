#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace swe {

using Vec3 = Eigen::Vector3d;

enum class GeometryKind { PlanePeriodic, Sphere };

class MeshError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Primal triangle T_i.
///
/// Local edge k joins vertices[k] and vertices[(k+1)%3]; vertices are
/// counterclockwise about the local vertical. All vectors are expressed in
/// the cell's own (unwrapped) frame, so periodic images never leak into
/// geometric formulas.
struct Cell {
  Vec3 center;                       // circumcenter (plane: wrapped, z = 0)
  double area = 0.0;                 // Omega_ii
  std::array<int, 3> vertices{};
  std::array<int, 3> edges{};
  std::array<int, 3> neighbors{};    // cell across edges[k]
  std::array<double, 3> edge_sign{}; // +1 when edge normal points out of this cell
  std::array<Vec3, 3> edge_offset;   // x_e - x_T for edges[k]
  std::array<double, 3> kite{};      // |zeta ∩ T| for vertices[k]
};

/// An edge that shares a dual vertex with edge e_ij, seen from T_i or T_j.
/// `sign` turns the stored edge value into the value outward from that cell,
/// `weight` is |zeta ∩ T| / (2 Omega_T).
struct Companion {
  int edge = -1;
  double sign = 0.0;
  double weight = 0.0;
};

/// Primal edge e_ij with its dual edge.
///
/// Orientation: normal points from cells[0] (T_i) to cells[1] (T_j) and
/// tangent = up x normal. `vertex_minus` (zeta_-) is the dual vertex lying on
/// the +tangent side of the midpoint and `vertex_plus` (zeta_+) on the
/// -tangent side, so that (G_minus - G_plus)/|e| is the derivative along the
/// tangent.
struct Edge {
  std::array<int, 2> cells{};
  int vertex_minus = -1;
  int vertex_plus = -1;
  double length = 0.0;      // |e_ij|
  double dual_length = 0.0; // |ẽ_ij|
  Vec3 normal;
  Vec3 tangent;
  Vec3 midpoint;
  /// [0]: edge of T_i touching the dual vertex, [1]: edge of T_j.
  std::array<Companion, 2> minus_side;
  std::array<Companion, 2> plus_side;
};

/// Dual cell around a primal vertex; lists are counterclockwise.
struct DualCell {
  Vec3 position;
  Vec3 up; // local vertical k_zeta
  double area = 0.0;
  std::vector<int> cells;
  std::vector<double> kites;
  std::vector<int> edges;
  /// +1 when the edge normal (T_i -> T_j) runs counterclockwise around this
  /// dual cell.
  std::vector<double> edge_sign;
};

struct Mesh {
  GeometryKind kind = GeometryKind::PlanePeriodic;
  double lx = 0.0;
  double ly = 0.0;
  double radius = 0.0;
  std::vector<Cell> cells;
  std::vector<Edge> edges;
  std::vector<DualCell> duals;

  [[nodiscard]] std::size_t num_cells() const { return cells.size(); }
  [[nodiscard]] std::size_t num_edges() const { return edges.size(); }
  [[nodiscard]] std::size_t num_duals() const { return duals.size(); }

  /// L_x L_y on the plane, 4 pi R^2 on the sphere.
  [[nodiscard]] double domain_area() const;
  /// Local vertical at an arbitrary point on the domain.
  [[nodiscard]] Vec3 up_at(const Vec3 &x) const;
  /// FNV-1a hash over topology and geometry; used to tie checkpoints to meshes.
  [[nodiscard]] std::uint64_t hash() const;
};

/// Raw triangulation handed to `assemble_mesh`.
///
/// Plane: `positions` are wrapped into [0,Lx)x[0,Ly) and every corner carries
/// an integer lattice shift so that the unwrapped corner is
/// positions[v] + (sx Lx, sy Ly). Sphere: positions are unit vectors and
/// shifts are ignored.
struct Triangulation {
  GeometryKind kind = GeometryKind::PlanePeriodic;
  double lx = 0.0;
  double ly = 0.0;
  double radius = 1.0;
  std::vector<Vec3> positions;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<std::array<int, 2>, 3>> shifts;
};

/// Build all derived geometry from a closed triangulation.
/// Throws MeshError on a degenerate dual (|ẽ| <= 0) or broken topology.
Mesh assemble_mesh(const Triangulation &tri);

/// Connectivity and vertex positions of the regular rhombic lattice used by
/// `build_plane_regular` (rows alternately offset by half a cell).
Triangulation plane_lattice(int nx, int ny, double lx, double ly);

/// Uniform periodic mesh with 2 nx ny triangles on a rhombic lattice
/// (rows alternately offset by half a cell, so ny must be even).
Mesh build_plane_regular(int nx, int ny, double lx, double ly);

struct IrregularPlaneOptions {
  double center_x = 0.5;          // refinement center, fraction of Lx
  double center_y = 0.5;          // fraction of Ly
  double inner_radius = 0.2;      // refined disk, fraction of min(Lx,Ly)/2
  double refinement_factor = 1.0; // outer / inner edge-length ratio
  double jitter = 0.0;            // vertex perturbation, fraction of lattice spacing
  std::uint64_t seed = 1;
};

/// Graded, jittered periodic Delaunay mesh (Lawson flips from the lattice).
Mesh build_plane_irregular(int nx, int ny, double lx, double ly,
                           const IrregularPlaneOptions &opts);

/// Recursively bisected icosahedron with 20 * 4^level triangles.
Mesh build_sphere(int level, double radius);

struct InvariantCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;
  int offender = -1; // entity index of the worst case, -1 if none
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;
  [[nodiscard]] bool ok() const;
  [[nodiscard]] const InvariantCheck *find(const std::string &name) const;
};

/// Re-derives every mesh invariant from the stored tables. Never throws.
ValidationReport validate(const Mesh &mesh);

/// Write triangles.csv, edges.csv and duals.csv into `dir`.
void export_mesh_csv(const Mesh &mesh, const std::string &dir);

} // namespace swe
