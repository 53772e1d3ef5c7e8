#include "swe/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <tuple>

#include "geometry.hpp"

namespace swe {

namespace {

struct EdgeKey {
  int a, b, dx, dy;
  auto operator<=>(const EdgeKey &) const = default;
};

EdgeKey make_key(int v0, int v1, std::array<int, 2> s0, std::array<int, 2> s1) {
  const int dx = s1[0] - s0[0], dy = s1[1] - s0[1];
  if (v0 < v1 || (v0 == v1 && std::tie(dx, dy) > std::tuple(0, 0))) return {v0, v1, dx, dy};
  return {v1, v0, -dx, -dy};
}

struct EdgeSlot {
  int cell = -1;
  int local = -1;
};

// Local tangent basis used to order entities counterclockwise around `up`.
std::pair<Vec3, Vec3> tangent_basis(const Vec3 &up) {
  Vec3 ref = std::abs(up.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 e1 = (ref - ref.dot(up) * up).normalized();
  return {e1, up.cross(e1)};
}

} // namespace

double Mesh::domain_area() const {
  if (kind == GeometryKind::Sphere) return 4.0 * std::numbers::pi * radius * radius;
  return lx * ly;
}

Vec3 Mesh::up_at(const Vec3 &x) const {
  if (kind == GeometryKind::Sphere) return x.normalized();
  return Vec3::UnitZ();
}

std::uint64_t Mesh::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix_bytes = [&h](const void *p, std::size_t n) {
    const auto *c = static_cast<const unsigned char *>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 1099511628211ull;
    }
  };
  auto mix_d = [&](double d) { mix_bytes(&d, sizeof d); };
  auto mix_i = [&](int i) { mix_bytes(&i, sizeof i); };
  mix_i(static_cast<int>(kind));
  mix_d(lx);
  mix_d(ly);
  mix_d(radius);
  for (const Cell &c : cells) {
    for (int v : c.vertices) mix_i(v);
    mix_d(c.area);
  }
  for (const Edge &e : edges) {
    mix_i(e.cells[0]);
    mix_i(e.cells[1]);
    mix_d(e.length);
    mix_d(e.dual_length);
  }
  return h;
}

Mesh assemble_mesh(const Triangulation &tri) {
  const bool sphere = tri.kind == GeometryKind::Sphere;
  const double scale = sphere ? tri.radius : 1.0;
  const std::size_t nt = tri.triangles.size();
  const std::size_t nv = tri.positions.size();

  Mesh mesh;
  mesh.kind = tri.kind;
  mesh.lx = tri.lx;
  mesh.ly = tri.ly;
  mesh.radius = sphere ? tri.radius : 0.0;
  mesh.cells.resize(nt);

  auto shift_of = [&](std::size_t t, int k) -> std::array<int, 2> {
    if (sphere || tri.shifts.empty()) return {0, 0};
    return tri.shifts[t][k];
  };

  // Corner positions in each triangle's own frame (unit sphere or unwrapped plane).
  std::vector<std::array<Vec3, 3>> corners(nt);
  std::vector<std::array<int, 3>> verts(nt);
  std::vector<std::array<std::array<int, 2>, 3>> shifts(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const int v = tri.triangles[t][k];
      if (v < 0 || static_cast<std::size_t>(v) >= nv)
        throw MeshError("triangle " + std::to_string(t) + " references missing vertex");
      const auto s = shift_of(t, k);
      verts[t][k] = v;
      shifts[t][k] = s;
      corners[t][k] = tri.positions[v] + Vec3(s[0] * tri.lx, s[1] * tri.ly, 0.0);
    }
    const auto &p = corners[t];
    const double orient = sphere ? p[0].dot(p[1].cross(p[2])) : geom::signed_area_2d(p[0], p[1], p[2]);
    if (orient == 0.0) throw MeshError("triangle " + std::to_string(t) + " is degenerate");
    if (orient < 0.0) {
      std::swap(corners[t][1], corners[t][2]);
      std::swap(verts[t][1], verts[t][2]);
      std::swap(shifts[t][1], shifts[t][2]);
    }
  }

  // Edge registration.
  std::map<EdgeKey, int> edge_index;
  std::vector<std::array<EdgeSlot, 2>> slots;
  for (std::size_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const int k1 = (k + 1) % 3;
      const EdgeKey key = make_key(verts[t][k], verts[t][k1], shifts[t][k], shifts[t][k1]);
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(slots.size()));
      if (inserted) {
        slots.push_back({EdgeSlot{static_cast<int>(t), k}, EdgeSlot{}});
      } else {
        auto &s = slots[it->second];
        if (s[1].cell >= 0)
          throw MeshError("edge " + std::to_string(it->second) + " is shared by more than two triangles");
        s[1] = EdgeSlot{static_cast<int>(t), k};
      }
      mesh.cells[t].edges[k] = it->second;
    }
  }
  const std::size_t ne = slots.size();
  for (std::size_t e = 0; e < ne; ++e)
    if (slots[e][1].cell < 0) throw MeshError("edge " + std::to_string(e) + " has only one triangle (open boundary)");

  // Per-cell geometry.
  std::vector<std::array<double, 3>> half_dual(nt);
  std::vector<std::array<Vec3, 3>> outward(nt);
  std::vector<Vec3> center_frame(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    Cell &cell = mesh.cells[t];
    cell.vertices = verts[t];
    const auto &p = corners[t];
    if (sphere) {
      const Vec3 cc = geom::spherical_circumcenter(p[0], p[1], p[2]);
      center_frame[t] = cc;
      cell.center = scale * cc;
      cell.area = geom::spherical_area(p[0], p[1], p[2]) * scale * scale;
      std::array<Vec3, 3> mid;
      for (int k = 0; k < 3; ++k) mid[k] = (p[k] + p[(k + 1) % 3]).normalized();
      for (int k = 0; k < 3; ++k) {
        const Vec3 &a = p[k], &b = p[(k + 1) % 3];
        const Vec3 n = b.cross(a).normalized();
        outward[t][k] = n;
        const Vec3 axis = mid[k].cross(n).normalized();
        half_dual[t][k] = std::atan2(cc.cross(mid[k]).dot(axis), cc.dot(mid[k])) * scale;
        cell.edge_offset[k] = scale * (mid[k] - cc);
        // Kite at corner k: bounded by the two half-edges meeting there.
        const Vec3 &m_out = mid[k];           // on edge k -> k+1
        const Vec3 &m_in = mid[(k + 2) % 3];  // on edge k+2 -> k
        cell.kite[k] = (geom::spherical_area(a, m_out, cc) + geom::spherical_area(a, cc, m_in)) * scale * scale;
      }
    } else {
      const Vec3 cc = geom::circumcenter_2d(p[0], p[1], p[2]);
      center_frame[t] = cc;
      cell.center = Vec3(geom::wrap(cc.x(), tri.lx), geom::wrap(cc.y(), tri.ly), 0.0);
      cell.area = geom::signed_area_2d(p[0], p[1], p[2]);
      std::array<Vec3, 3> mid;
      for (int k = 0; k < 3; ++k) mid[k] = 0.5 * (p[k] + p[(k + 1) % 3]);
      for (int k = 0; k < 3; ++k) {
        const Vec3 d = p[(k + 1) % 3] - p[k];
        const Vec3 n = Vec3(d.y(), -d.x(), 0.0).normalized();
        outward[t][k] = n;
        half_dual[t][k] = (mid[k] - cc).dot(n);
        cell.edge_offset[k] = mid[k] - cc;
        cell.kite[k] = geom::signed_area_2d(p[k], mid[k], cc) + geom::signed_area_2d(p[k], cc, mid[(k + 2) % 3]);
      }
    }
  }

  // Edges.
  mesh.edges.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    Edge &edge = mesh.edges[e];
    const auto [ti, ki] = slots[e][0];
    const auto [tj, kj] = slots[e][1];
    edge.cells = {ti, tj};
    mesh.cells[ti].edge_sign[ki] = 1.0;
    mesh.cells[tj].edge_sign[kj] = -1.0;
    mesh.cells[ti].neighbors[ki] = tj;
    mesh.cells[tj].neighbors[kj] = ti;

    const auto &p = corners[ti];
    const Vec3 &a = p[ki], &b = p[(ki + 1) % 3];
    edge.normal = outward[ti][ki];
    edge.dual_length = half_dual[ti][ki] + half_dual[tj][kj];
    Vec3 mid;
    if (sphere) {
      const Vec3 m = (a + b).normalized();
      edge.length = geom::arc(a, b) * scale;
      edge.midpoint = scale * m;
      edge.tangent = m.cross(edge.normal);
      mid = m;
    } else {
      mid = 0.5 * (a + b);
      edge.length = (b - a).norm();
      edge.midpoint = Vec3(geom::wrap(mid.x(), tri.lx), geom::wrap(mid.y(), tri.ly), 0.0);
      edge.tangent = Vec3::UnitZ().cross(edge.normal);
    }
    if (!(edge.dual_length > 1e-12 * edge.length))
      throw MeshError("degenerate dual edge " + std::to_string(e) + " (|ẽ| = " + std::to_string(edge.dual_length) +
                      "); circumcenter dual requires a Delaunay mesh");
    const bool a_is_minus = (a - mid).dot(edge.tangent) > 0.0;
    edge.vertex_minus = a_is_minus ? verts[ti][ki] : verts[ti][(ki + 1) % 3];
    edge.vertex_plus = a_is_minus ? verts[ti][(ki + 1) % 3] : verts[ti][ki];
    if (edge.vertex_minus == edge.vertex_plus)
      throw MeshError("edge " + std::to_string(e) + " joins a vertex to its own periodic image");
  }

  // Companion edges sharing a dual vertex with e, one from each adjacent cell.
  auto companion = [&](int cell_id, int local_edge, int vertex) {
    const Cell &c = mesh.cells[cell_id];
    int corner = -1;
    for (int k : {local_edge, (local_edge + 1) % 3})
      if (c.vertices[k] == vertex) corner = k;
    const int other = (corner == local_edge) ? (corner + 2) % 3 : corner;
    return Companion{c.edges[other], c.edge_sign[other], c.kite[corner] / (2.0 * c.area)};
  };
  for (std::size_t e = 0; e < ne; ++e) {
    Edge &edge = mesh.edges[e];
    const auto [ti, ki] = slots[e][0];
    const auto [tj, kj] = slots[e][1];
    edge.minus_side = {companion(ti, ki, edge.vertex_minus), companion(tj, kj, edge.vertex_minus)};
    edge.plus_side = {companion(ti, ki, edge.vertex_plus), companion(tj, kj, edge.vertex_plus)};
  }

  // Dual cells.
  mesh.duals.resize(nv);
  std::vector<std::vector<std::pair<double, int>>> cell_order(nv), edge_order(nv);
  std::vector<std::pair<Vec3, Vec3>> basis(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    DualCell &d = mesh.duals[v];
    if (sphere) {
      d.position = scale * tri.positions[v];
      d.up = tri.positions[v].normalized();
    } else {
      d.position = Vec3(geom::wrap(tri.positions[v].x(), tri.lx), geom::wrap(tri.positions[v].y(), tri.ly), 0.0);
      d.up = Vec3::UnitZ();
    }
    basis[v] = tangent_basis(d.up);
  }
  auto angle_about = [&](int v, const Vec3 &offset) {
    return std::atan2(offset.dot(basis[v].second), offset.dot(basis[v].first));
  };
  for (std::size_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const int v = verts[t][k];
      cell_order[v].push_back({angle_about(v, center_frame[t] - corners[t][k]), static_cast<int>(t * 3 + k)});
    }
  }
  for (std::size_t e = 0; e < ne; ++e) {
    const auto [ti, ki] = slots[e][0];
    const auto &p = corners[ti];
    const Vec3 mid = sphere ? Vec3((p[ki] + p[(ki + 1) % 3]).normalized()) : Vec3(0.5 * (p[ki] + p[(ki + 1) % 3]));
    for (int k : {ki, (ki + 1) % 3}) {
      const int v = verts[ti][k];
      edge_order[v].push_back({angle_about(v, mid - p[k]), static_cast<int>(e)});
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    DualCell &d = mesh.duals[v];
    std::sort(cell_order[v].begin(), cell_order[v].end());
    std::sort(edge_order[v].begin(), edge_order[v].end());
    for (auto [ang, code] : cell_order[v]) {
      const int t = code / 3, k = code % 3;
      d.cells.push_back(t);
      d.kites.push_back(mesh.cells[t].kite[k]);
    }
    d.area = std::accumulate(d.kites.begin(), d.kites.end(), 0.0);
    for (auto [ang, e] : edge_order[v]) {
      d.edges.push_back(e);
      d.edge_sign.push_back(mesh.edges[e].vertex_minus == static_cast<int>(v) ? 1.0 : -1.0);
    }
    if (d.cells.empty()) throw MeshError("vertex " + std::to_string(v) + " is not used by any triangle");
  }
  return mesh;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck &c) { return c.passed; });
}

const InvariantCheck *ValidationReport::find(const std::string &name) const {
  for (const auto &c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate(const Mesh &mesh) {
  ValidationReport report;
  const bool sphere = mesh.kind == GeometryKind::Sphere;
  const double area = mesh.domain_area();
  const double area_tol = sphere ? 1e-10 : 1e-12;

  {
    double sum = 0.0;
    for (const Cell &c : mesh.cells) sum += c.area;
    const double rel = std::abs(sum - area) / area;
    report.checks.push_back({"cell area sum", rel <= area_tol, rel, -1});
  }
  {
    double sum = 0.0;
    for (const DualCell &d : mesh.duals) sum += d.area;
    const double rel = std::abs(sum - area) / area;
    report.checks.push_back({"dual area sum", rel <= area_tol, rel, -1});
  }
  {
    // Kites regrouped per dual cell must reproduce |zeta|; recompute from the
    // cell tables rather than trusting DualCell::kites.
    std::vector<double> from_cells(mesh.num_duals(), 0.0);
    for (const Cell &c : mesh.cells)
      for (int k = 0; k < 3; ++k) from_cells[c.vertices[k]] += c.kite[k];
    InvariantCheck chk{"dual kite partition", true, 0.0, -1};
    for (std::size_t v = 0; v < mesh.num_duals(); ++v) {
      const double rel = std::abs(from_cells[v] - mesh.duals[v].area) / std::abs(mesh.duals[v].area);
      if (rel > chk.worst) chk = {chk.name, true, rel, static_cast<int>(v)};
    }
    chk.passed = chk.worst <= 1e-10;
    report.checks.push_back(chk);
  }
  {
    InvariantCheck chk{"cell kite partition", true, 0.0, -1};
    for (std::size_t t = 0; t < mesh.num_cells(); ++t) {
      const Cell &c = mesh.cells[t];
      const double rel = std::abs(c.kite[0] + c.kite[1] + c.kite[2] - c.area) / c.area;
      if (rel > chk.worst) chk = {chk.name, true, rel, static_cast<int>(t)};
    }
    chk.passed = chk.worst <= 1e-10;
    report.checks.push_back(chk);
  }
  {
    InvariantCheck chk{"|ẽ|>0", true, 0.0, -1};
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      const double r = mesh.edges[e].dual_length / mesh.edges[e].length;
      if (r < worst) {
        worst = r;
        chk.offender = static_cast<int>(e);
      }
    }
    chk.worst = worst;
    chk.passed = worst > 0.0;
    report.checks.push_back(chk);
  }
  {
    InvariantCheck chk{"closed topology", true, 0.0, -1};
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      const Edge &ed = mesh.edges[e];
      if (ed.cells[0] == ed.cells[1] || ed.vertex_minus == ed.vertex_plus || ed.cells[0] < 0 || ed.cells[1] < 0) {
        chk.passed = false;
        chk.worst += 1.0;
        chk.offender = static_cast<int>(e);
      }
    }
    report.checks.push_back(chk);
  }
  {
    // Right-handed frame and zeta_- on the +tangent side.
    InvariantCheck chk{"edge orientation", true, 0.0, -1};
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      const Edge &ed = mesh.edges[e];
      const Vec3 up = mesh.up_at(ed.midpoint);
      double err = (up.cross(ed.normal) - ed.tangent).norm();
      Vec3 to_minus = mesh.duals[ed.vertex_minus].position - ed.midpoint;
      if (mesh.kind == GeometryKind::PlanePeriodic) {
        to_minus.x() -= mesh.lx * std::round(to_minus.x() / mesh.lx);
        to_minus.y() -= mesh.ly * std::round(to_minus.y() / mesh.ly);
      }
      if (to_minus.dot(ed.tangent) <= 0.0) err += 1.0;
      const Cell &ci = mesh.cells[ed.cells[0]];
      Vec3 towards_j = mesh.cells[ed.cells[1]].center - ci.center;
      if (mesh.kind == GeometryKind::PlanePeriodic) {
        towards_j.x() -= mesh.lx * std::round(towards_j.x() / mesh.lx);
        towards_j.y() -= mesh.ly * std::round(towards_j.y() / mesh.ly);
      }
      if (towards_j.dot(ed.normal) <= 0.0) err += 1.0;
      if (err > chk.worst) {
        chk.worst = err;
        chk.offender = static_cast<int>(e);
      }
    }
    chk.passed = chk.worst <= 1e-12;
    report.checks.push_back(chk);
  }
  return report;
}

void export_mesh_csv(const Mesh &mesh, const std::string &dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const bool sphere = mesh.kind == GeometryKind::Sphere;
  auto num = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  {
    std::ofstream out(fs::path(dir) / "triangles.csv");
    out << (sphere ? "id,cx,cy,cz,area\n" : "id,cx,cy,area\n");
    for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
      const Cell &c = mesh.cells[i];
      out << i << ',' << num(c.center.x()) << ',' << num(c.center.y()) << ',';
      if (sphere) out << num(c.center.z()) << ',';
      out << num(c.area) << '\n';
    }
  }
  {
    std::ofstream out(fs::path(dir) / "edges.csv");
    out << (sphere ? "id,i,j,len_e,len_de,nx,ny,nz\n" : "id,i,j,len_e,len_de,nx,ny\n");
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      const Edge &ed = mesh.edges[e];
      out << e << ',' << ed.cells[0] << ',' << ed.cells[1] << ',' << num(ed.length) << ',' << num(ed.dual_length) << ','
          << num(ed.normal.x()) << ',' << num(ed.normal.y());
      if (sphere) out << ',' << num(ed.normal.z());
      out << '\n';
    }
  }
  {
    std::ofstream out(fs::path(dir) / "duals.csv");
    out << "id,area\n";
    for (std::size_t v = 0; v < mesh.num_duals(); ++v) out << v << ',' << num(mesh.duals[v].area) << '\n';
  }
}

} // namespace swe
