#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "geometry.hpp"
#include "swe/mesh.hpp"

namespace swe {

namespace {

using Shift = std::array<int, 2>;

// Rhombic lattice: rows alternately offset by half a cell.
Triangulation lattice_triangulation(int nx, int ny, double lx, double ly) {
  if (nx < 2 || ny < 2) throw MeshError("plane mesh needs nx, ny >= 2");
  if (ny % 2 != 0) throw MeshError("plane mesh needs an even ny (rows alternate offsets)");
  if (!(lx > 0.0) || !(ly > 0.0)) throw MeshError("plane mesh needs Lx, Ly > 0");
  Triangulation tri;
  tri.kind = GeometryKind::PlanePeriodic;
  tri.lx = lx;
  tri.ly = ly;
  const double dx = lx / nx, dy = ly / ny;
  tri.positions.resize(static_cast<std::size_t>(nx) * ny);
  auto id = [nx](int a, int b) { return b * nx + a; };
  for (int b = 0; b < ny; ++b)
    for (int a = 0; a < nx; ++a) tri.positions[id(a, b)] = Vec3((a + 0.5 * (b % 2)) * dx, b * dy, 0.0);

  // Corner (a, b) possibly past the last column/row, folded back with a shift.
  auto corner = [&](int a, int b) -> std::pair<int, Shift> {
    Shift s{0, 0};
    if (a >= nx) {
      a -= nx;
      s[0] = 1;
    }
    if (b >= ny) {
      b -= ny;
      s[1] = 1;
    }
    return {id(a, b), s};
  };
  auto add = [&](std::pair<int, Shift> p, std::pair<int, Shift> q, std::pair<int, Shift> r) {
    tri.triangles.push_back({p.first, q.first, r.first});
    tri.shifts.push_back({p.second, q.second, r.second});
  };
  for (int b = 0; b < ny; ++b) {
    for (int a = 0; a < nx; ++a) {
      if (b % 2 == 0) {
        add(corner(a, b), corner(a + 1, b), corner(a, b + 1));
        add(corner(a + 1, b), corner(a + 1, b + 1), corner(a, b + 1));
      } else {
        add(corner(a, b), corner(a + 1, b), corner(a + 1, b + 1));
        add(corner(a, b), corner(a + 1, b + 1), corner(a, b + 1));
      }
    }
  }
  return tri;
}

Vec3 unwrapped(const Triangulation &tri, int t, int k) {
  const int v = tri.triangles[t][k];
  const Shift s = tri.shifts[t][k];
  return tri.positions[v] + Vec3(s[0] * tri.lx, s[1] * tri.ly, 0.0);
}

// Positive when d lies strictly inside the circumcircle of ccw (a, b, c).
double in_circle(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

// Lawson flips until every edge is locally Delaunay. Triangles must be ccw.
void make_delaunay(Triangulation &tri) {
  const int nt = static_cast<int>(tri.triangles.size());
  for (int pass = 0; pass < 1000; ++pass) {
    struct Key {
      int a, b, dx, dy;
      auto operator<=>(const Key &) const = default;
    };
    std::map<Key, std::vector<std::pair<int, int>>> edges;
    for (int t = 0; t < nt; ++t) {
      for (int k = 0; k < 3; ++k) {
        const int k1 = (k + 1) % 3;
        int v0 = tri.triangles[t][k], v1 = tri.triangles[t][k1];
        Shift s0 = tri.shifts[t][k], s1 = tri.shifts[t][k1];
        int dx = s1[0] - s0[0], dy = s1[1] - s0[1];
        if (v0 > v1 || (v0 == v1 && std::pair(dx, dy) < std::pair(0, 0))) {
          std::swap(v0, v1);
          dx = -dx;
          dy = -dy;
        }
        edges[{v0, v1, dx, dy}].push_back({t, k});
      }
    }
    std::vector<char> touched(nt, 0);
    int flips = 0;
    for (const auto &[key, uses] : edges) {
      if (uses.size() != 2) throw MeshError("irregular mesh: edge not shared by exactly two triangles");
      auto [t1, k1] = uses[0];
      auto [t2, k2] = uses[1];
      if (touched[t1] || touched[t2]) continue;
      // Bring t2 into t1's frame via the shared vertex.
      const int va = tri.triangles[t1][k1];
      int ka2 = -1;
      for (int k : {k2, (k2 + 1) % 3})
        if (tri.triangles[t2][k] == va) ka2 = k;
      const Shift d{tri.shifts[t1][k1][0] - tri.shifts[t2][ka2][0], tri.shifts[t1][k1][1] - tri.shifts[t2][ka2][1]};
      for (auto &s : tri.shifts[t2]) s = {s[0] + d[0], s[1] + d[1]};

      const int c1 = (k1 + 2) % 3, c2 = (k2 + 2) % 3;
      const Vec3 a = unwrapped(tri, t1, k1), b = unwrapped(tri, t1, (k1 + 1) % 3);
      const Vec3 c = unwrapped(tri, t1, c1), dd = unwrapped(tri, t2, c2);
      const double scale = (b - a).squaredNorm();
      if (in_circle(a, b, c, dd) <= 1e-12 * scale * scale) continue;

      const std::pair<int, Shift> A{tri.triangles[t1][k1], tri.shifts[t1][k1]};
      const std::pair<int, Shift> B{tri.triangles[t1][(k1 + 1) % 3], tri.shifts[t1][(k1 + 1) % 3]};
      const std::pair<int, Shift> C{tri.triangles[t1][c1], tri.shifts[t1][c1]};
      const std::pair<int, Shift> D{tri.triangles[t2][c2], tri.shifts[t2][c2]};
      // Quad A, D, B, C is ccw; replace diagonal AB by CD.
      tri.triangles[t1] = {A.first, D.first, C.first};
      tri.shifts[t1] = {A.second, D.second, C.second};
      tri.triangles[t2] = {D.first, B.first, C.first};
      tri.shifts[t2] = {D.second, B.second, C.second};
      for (int t : {t1, t2})
        if (geom::signed_area_2d(unwrapped(tri, t, 0), unwrapped(tri, t, 1), unwrapped(tri, t, 2)) <= 0.0)
          throw MeshError("irregular mesh: non-convex flip; reduce jitter or grading");
      touched[t1] = touched[t2] = 1;
      ++flips;
    }
    if (flips == 0) return;
  }
  throw MeshError("irregular mesh: Delaunay flipping did not terminate");
}

} // namespace

Triangulation plane_lattice(int nx, int ny, double lx, double ly) { return lattice_triangulation(nx, ny, lx, ly); }

Mesh build_plane_regular(int nx, int ny, double lx, double ly) {
  return assemble_mesh(lattice_triangulation(nx, ny, lx, ly));
}

Mesh build_plane_irregular(int nx, int ny, double lx, double ly, const IrregularPlaneOptions &opts) {
  if (!(opts.refinement_factor >= 1.0)) throw MeshError("refinement_factor must be >= 1");
  if (!(opts.inner_radius > 0.0 && opts.inner_radius < 0.95)) throw MeshError("inner_radius must be in (0, 0.95)");
  Triangulation tri = lattice_triangulation(nx, ny, lx, ly);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double dx = lx / nx, dy = ly / ny;
  const Vec3 center(opts.center_x * lx, opts.center_y * ly, 0.0);
  const double half = 0.5 * std::min(lx, ly);
  const double r0 = opts.inner_radius * half;
  const double r1 = 0.98 * half;
  const double f = opts.refinement_factor;
  const double power = std::log(f) / std::log(r1 / r0);

  // Radial grading x -> c + g(r) (x - c): g = 1/f inside r0, a power-law ramp
  // up to 1 at r1, identity outside. Monotone in r, so the lattice
  // connectivity stays valid before flipping.
  auto grade = [&](double r) {
    if (r <= r0) return 1.0 / f;
    if (r >= r1) return 1.0;
    return std::pow(r / r0, power) / f;
  };

  // Perturbations shift vertices; remember them so shifts stay consistent.
  std::vector<Shift> wrap_shift(tri.positions.size(), Shift{0, 0});
  for (std::size_t v = 0; v < tri.positions.size(); ++v) {
    Vec3 p = tri.positions[v];
    const double jx = opts.jitter * dx * unit(rng);
    const double jy = opts.jitter * dy * unit(rng);
    p += Vec3(jx, jy, 0.0);
    Vec3 rel = p - center;
    rel.x() -= lx * std::round(rel.x() / lx);
    rel.y() -= ly * std::round(rel.y() / ly);
    if (f > 1.0) p += (grade(rel.norm()) - 1.0) * rel;
    const double wx = std::floor(p.x() / lx), wy = std::floor(p.y() / ly);
    wrap_shift[v] = {static_cast<int>(wx), static_cast<int>(wy)};
    tri.positions[v] = Vec3(p.x() - wx * lx, p.y() - wy * ly, 0.0);
  }
  // Keep each triangle's corners at their unwrapped (moved) positions.
  for (std::size_t t = 0; t < tri.triangles.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      const int v = tri.triangles[t][k];
      tri.shifts[t][k][0] += wrap_shift[v][0];
      tri.shifts[t][k][1] += wrap_shift[v][1];
    }
  for (std::size_t t = 0; t < tri.triangles.size(); ++t)
    if (geom::signed_area_2d(unwrapped(tri, static_cast<int>(t), 0), unwrapped(tri, static_cast<int>(t), 1),
                             unwrapped(tri, static_cast<int>(t), 2)) <= 0.0)
      throw MeshError("irregular mesh: perturbation inverted triangle " + std::to_string(t));
  make_delaunay(tri);
  return assemble_mesh(tri);
}

Mesh build_sphere(int level, double radius) {
  if (level < 0) throw MeshError("sphere refinement level must be >= 0");
  if (!(radius > 0.0)) throw MeshError("sphere radius must be > 0");
  Triangulation tri;
  tri.kind = GeometryKind::Sphere;
  tri.radius = radius;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double raw[12][3] = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                             {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto &p : raw) tri.positions.push_back(Vec3(p[0], p[1], p[2]).normalized());
  tri.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                   {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                   {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int id = static_cast<int>(tri.positions.size());
      tri.positions.push_back((tri.positions[a] + tri.positions[b]).normalized());
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(tri.triangles.size() * 4);
    for (const auto &t : tri.triangles) {
      const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({ab, t[1], bc});
      next.push_back({ca, bc, t[2]});
      next.push_back({ab, bc, ca});
    }
    tri.triangles = std::move(next);
  }
  return assemble_mesh(tri);
}

} // namespace swe
