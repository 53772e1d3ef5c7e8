#include <cmath>
#include <numbers>

#include "doctest.h"
#include "swe/mesh.hpp"

using namespace swe;

namespace {

double min_image(double d, double period) { return d - period * std::round(d / period); }

// L'Huilier's theorem, used as an independent check of the face areas.
double lhuilier_area(const Vec3 &a, const Vec3 &b, const Vec3 &c) {
  auto arc = [](const Vec3 &p, const Vec3 &q) { return std::acos(std::clamp(p.dot(q), -1.0, 1.0)); };
  const double x = arc(b, c), y = arc(c, a), z = arc(a, b);
  const double s = 0.5 * (x + y + z);
  const double t = std::tan(s / 2) * std::tan((s - x) / 2) * std::tan((s - y) / 2) * std::tan((s - z) / 2);
  return 4.0 * std::atan(std::sqrt(std::max(t, 0.0)));
}

} // namespace

TEST_CASE("regular plane mesh counts, area and equilateral dual lengths") {
  const double ly = std::sqrt(3.0) / 2.0;
  const Mesh m = build_plane_regular(4, 4, 1.0, ly);
  CHECK(m.num_cells() == 32);
  CHECK(m.num_edges() == 48);
  CHECK(m.num_duals() == 16);
  double area = 0.0;
  for (const auto &c : m.cells) area += c.area;
  CHECK(area == doctest::Approx(ly).epsilon(1e-14));

  // Brute force: distance between the two circumcenters, recomputed from the
  // wrapped cell centers by minimum image.
  for (const auto &e : m.edges) {
    const Vec3 ci = m.cells[e.cells[0]].center, cj = m.cells[e.cells[1]].center;
    const double dx = min_image(cj.x() - ci.x(), m.lx), dy = min_image(cj.y() - ci.y(), m.ly);
    const double brute = std::hypot(dx, dy);
    CHECK(e.length == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(brute == doctest::Approx(0.25 / std::sqrt(3.0)).epsilon(1e-13));
    CHECK(e.dual_length == doctest::Approx(brute).epsilon(1e-13));
  }
}

TEST_CASE("128 x 128 plane has 32768 triangles") {
  const Mesh m = build_plane_regular(128, 128, 5.0e6, 4.33e6);
  CHECK(m.num_cells() == 32768);
  CHECK(validate(m).ok());
}

TEST_CASE("plane builder rejects bad arguments") {
  CHECK_THROWS_AS(build_plane_regular(1, 4, 1.0, 1.0), MeshError);
  CHECK_THROWS_AS(build_plane_regular(4, 3, 1.0, 1.0), MeshError);
  CHECK_THROWS_AS(build_plane_regular(4, 4, -1.0, 1.0), MeshError);
}

TEST_CASE("periodicity: translating every vertex leaves geometry tables unchanged") {
  const double lx = 3.0, ly = 2.0;
  const Triangulation base = plane_lattice(6, 4, lx, ly);
  Triangulation moved = base;
  const Vec3 delta(0.37 * lx, 0.81 * ly, 0.0);
  for (std::size_t v = 0; v < moved.positions.size(); ++v) {
    const Vec3 p = base.positions[v] + delta;
    const int wx = static_cast<int>(std::floor(p.x() / lx)), wy = static_cast<int>(std::floor(p.y() / ly));
    moved.positions[v] = Vec3(p.x() - wx * lx, p.y() - wy * ly, 0.0);
    for (std::size_t t = 0; t < moved.triangles.size(); ++t)
      for (int k = 0; k < 3; ++k)
        if (moved.triangles[t][k] == static_cast<int>(v)) {
          moved.shifts[t][k][0] = base.shifts[t][k][0] + wx;
          moved.shifts[t][k][1] = base.shifts[t][k][1] + wy;
        }
  }
  const Mesh a = assemble_mesh(base), b = assemble_mesh(moved);
  REQUIRE(a.num_edges() == b.num_edges());
  for (std::size_t t = 0; t < a.num_cells(); ++t) {
    CHECK(a.cells[t].area == doctest::Approx(b.cells[t].area).epsilon(1e-12));
    CHECK(min_image(b.cells[t].center.x() - a.cells[t].center.x() - delta.x(), lx) == doctest::Approx(0.0).scale(1.0));
    CHECK(min_image(b.cells[t].center.y() - a.cells[t].center.y() - delta.y(), ly) == doctest::Approx(0.0).scale(1.0));
  }
  for (std::size_t e = 0; e < a.num_edges(); ++e) {
    CHECK(a.edges[e].length == doctest::Approx(b.edges[e].length).epsilon(1e-12));
    CHECK(a.edges[e].dual_length == doctest::Approx(b.edges[e].dual_length).epsilon(1e-12));
    CHECK((a.edges[e].normal - b.edges[e].normal).norm() < 1e-12);
  }
}

TEST_CASE("sphere combinatorics") {
  const Mesh ico = build_sphere(0, 1.0);
  CHECK(ico.num_cells() == 20);
  CHECK(ico.num_edges() == 30);
  CHECK(ico.num_duals() == 12);
  for (const auto &d : ico.duals) CHECK(d.cells.size() == 5);

  const Mesh fine = build_sphere(6, 6.37122e6);
  CHECK(fine.num_cells() == 81920);
}

TEST_CASE("sphere cell areas sum to 4 pi R^2 (spherical excess oracle)") {
  const double radius = 6.37122e6;
  for (int level = 0; level <= 4; ++level) {
    const Mesh m = build_sphere(level, radius);
    double stored = 0.0, oracle = 0.0;
    for (const auto &c : m.cells) {
      stored += c.area;
      const Vec3 a = m.duals[c.vertices[0]].position / radius, b = m.duals[c.vertices[1]].position / radius,
                 cc = m.duals[c.vertices[2]].position / radius;
      const double excess = lhuilier_area(a, b, cc) * radius * radius;
      CHECK(c.area == doctest::Approx(excess).epsilon(1e-9));
      oracle += excess;
    }
    const double total = 4.0 * std::numbers::pi * radius * radius;
    CHECK(std::abs(stored - total) / total < 1e-10);
    CHECK(std::abs(oracle - total) / total < 1e-9);
  }
}

TEST_CASE("validate: regular mesh passes, injected collapsed dual edge is reported") {
  const Mesh m = build_plane_regular(4, 4, 1.0, std::sqrt(3.0) / 2.0);
  const ValidationReport ok = validate(m);
  for (const auto &c : ok.checks) CHECK_MESSAGE(c.passed, c.name);

  Mesh broken = m;
  broken.edges[17].dual_length = 0.0;
  const ValidationReport bad = validate(broken);
  CHECK_FALSE(bad.ok());
  const InvariantCheck *chk = bad.find("|ẽ|>0");
  REQUIRE(chk != nullptr);
  CHECK_FALSE(chk->passed);
  CHECK(chk->offender == 17);
}

TEST_CASE("validate: sphere level 3 kite partition") {
  const Mesh m = build_sphere(3, 1.0);
  const ValidationReport r = validate(m);
  for (const auto &c : r.checks) CHECK_MESSAGE(c.passed, c.name);
  CHECK(r.find("dual kite partition")->worst < 1e-10);
  CHECK(r.find("cell kite partition")->worst < 1e-10);
  for (const auto &d : m.duals) {
    double s = 0.0;
    for (double k : d.kites) s += k;
    CHECK(std::abs(s - d.area) < 1e-10 * d.area);
  }
}

TEST_CASE("orientation conventions") {
  for (const Mesh &m : {build_plane_regular(6, 6, 2.0, 1.7), build_sphere(2, 1.0)}) {
    for (const auto &e : m.edges) {
      const Vec3 up = m.up_at(e.midpoint);
      CHECK((up.cross(e.normal) - e.tangent).norm() < 1e-12);
      CHECK(std::abs(e.normal.dot(up)) < 1e-12);
      CHECK(e.vertex_minus != e.vertex_plus);
      CHECK(e.cells[0] != e.cells[1]);
    }
    // Each edge appears once with + and once with - around its two dual cells.
    std::vector<double> net(m.num_edges(), 0.0);
    for (const auto &d : m.duals)
      for (std::size_t k = 0; k < d.edges.size(); ++k) net[d.edges[k]] += d.edge_sign[k];
    for (double s : net) CHECK(s == 0.0);
  }
}

TEST_CASE("irregular plane mesh") {
  const double lx = 5.0e6, ly = 4.33e6;
  SUBCASE("no grading and no jitter reproduces the regular mesh") {
    const Mesh reg = build_plane_regular(16, 16, lx, ly);
    const Mesh irr = build_plane_irregular(16, 16, lx, ly, IrregularPlaneOptions{});
    CHECK(irr.num_cells() == reg.num_cells());
    CHECK(irr.num_edges() == reg.num_edges());
    CHECK(irr.hash() == reg.hash());
  }
  SUBCASE("fixed seed is bitwise deterministic") {
    IrregularPlaneOptions o;
    o.refinement_factor = 2.0;
    o.jitter = 0.1;
    o.seed = 42;
    const Mesh a = build_plane_irregular(16, 16, lx, ly, o);
    const Mesh b = build_plane_irregular(16, 16, lx, ly, o);
    CHECK(a.hash() == b.hash());
    CHECK(validate(a).ok());
  }
  SUBCASE("refinement shrinks edges inside the central disk") {
    IrregularPlaneOptions o;
    o.refinement_factor = 2.0;
    o.jitter = 0.05;
    const Mesh m = build_plane_irregular(32, 32, lx, ly, o);
    CHECK(validate(m).ok());
    const double r0 = o.inner_radius * 0.5 * std::min(lx, ly);
    double min_in = 1e300, min_out = 1e300;
    for (const auto &e : m.edges) {
      const double dx = min_image(e.midpoint.x() - 0.5 * lx, lx), dy = min_image(e.midpoint.y() - 0.5 * ly, ly);
      double &slot = std::hypot(dx, dy) < r0 ? min_in : min_out;
      slot = std::min(slot, e.length);
    }
    CHECK(min_in < min_out);
  }
  CHECK_THROWS_AS(build_plane_irregular(8, 8, lx, ly, IrregularPlaneOptions{.refinement_factor = 0.5}), MeshError);
}
