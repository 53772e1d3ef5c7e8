#include <cmath>
#include <random>

#include "doctest.h"
#include "matrix_oracle.hpp"
#include "swe/dynamics.hpp"
#include "swe/operators.hpp"

using namespace swe;

namespace {

template <class F> F random_field(std::size_t n, unsigned seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  F out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = u(rng);
  return out;
}

double max_abs(const EdgeField &a) {
  double s = 0.0;
  for (double x : a) s = std::max(s, std::abs(x));
  return s;
}

std::vector<Mesh> oracle_meshes() {
  IrregularPlaneOptions o;
  o.jitter = 0.15;
  o.seed = 3;
  return {build_plane_regular(8, 8, 1.0, 1.0), build_plane_irregular(8, 8, 1.0, 1.0, o), build_sphere(1, 1.0)};
}

} // namespace

TEST_CASE("momentum tendency matches the dense projected equations") {
  unsigned seed = 10;
  for (const Mesh &m : oracle_meshes()) {
    const EdgeField V = random_field<EdgeField>(m.num_edges(), ++seed, -1, 1);
    const EdgeField r = random_field<EdgeField>(m.num_edges(), ++seed, -1, 1);
    const CellField h = random_field<CellField>(m.num_cells(), ++seed, 1, 2);
    const CellField eta = random_field<CellField>(m.num_cells(), ++seed, 0, 0.5);
    const double g = 9.81;
    const DualField f = ops::curl(m, r);
    const EdgeField ref = oracle::momentum_tendency(m, V, r, h, eta, g);
    const EdgeField adv = adv_term(m, V, h, f), k = kinetic_term(m, V), gr = gradient_term(m, h, eta, g);
    for (std::size_t e = 0; e < m.num_edges(); ++e)
      CHECK(std::abs(-adv[e] - k[e] - gr[e] - ref[e]) < 1e-12 * max_abs(ref));
  }
}

TEST_CASE("coriolis_dual") {
  PhysicalParams p;
  p.f0 = 6.147e-5;
  const Mesh plane = build_plane_regular(4, 4, 1.0, 1.0);
  for (double f : coriolis_dual(p, plane)) CHECK(f == 6.147e-5);
  const Mesh sphere = build_sphere(0, 6.37122e6);
  const DualField fs = coriolis_dual(p, sphere);
  for (std::size_t z = 0; z < sphere.num_duals(); ++z) {
    const double lat = std::asin(sphere.duals[z].position.z() / sphere.duals[z].position.norm());
    CHECK(fs[z] == doctest::Approx(2.0 * p.omega * std::sin(lat)));
  }
  // pole and equator
  Mesh probe = sphere;
  probe.duals[0].up = Vec3(0, 0, 1);
  probe.duals[1].up = Vec3(1, 0, 0);
  const DualField fp = coriolis_dual(p, probe);
  CHECK(fp[0] == doctest::Approx(2.0 * p.omega));
  CHECK(fp[1] == 0.0);
}

TEST_CASE("adv_term") {
  const Mesh m = build_plane_regular(8, 8, 1.0, 1.0);
  const CellField h = random_field<CellField>(m.num_cells(), 1, 1, 2);
  const DualField f(m.num_duals(), 0.3);
  for (double x : adv_term(m, EdgeField(m.num_edges(), 0.0), h, f)) CHECK(x == 0.0);
  SUBCASE("f = 0 and a constant field give zero") {
    const EdgeField v = ops::sample_normal(m, [](const Vec3 &) { return Vec3(0.4, -0.2, 0); });
    CHECK(max_abs(adv_term(m, v, h, DualField(m.num_duals(), 0.0))) < 1e-14);
  }
  SUBCASE("non-positive depth faults") {
    CellField bad = h;
    bad[0] = -5.0;
    CHECK_THROWS_AS(adv_term(m, EdgeField(m.num_edges(), 1.0), bad, f), NumericalError);
  }
  SUBCASE("Coriolis force turns a uniform flow to the right for f > 0") {
    // -Adv ~ -f k x u: for u = (1, 0) the tendency points towards -y.
    const Mesh fine = build_plane_regular(16, 16, 1.0, std::sqrt(3.0) / 2.0);
    const EdgeField v = ops::sample_normal(fine, [](const Vec3 &) { return Vec3(1, 0, 0); });
    const EdgeField t = adv_term(fine, v, CellField(fine.num_cells(), 1.0), DualField(fine.num_duals(), 1.0));
    for (std::size_t e = 0; e < fine.num_edges(); ++e) CHECK(-t[e] == doctest::Approx(-fine.edges[e].normal.y()).epsilon(1e-9));
  }
}

TEST_CASE("kinetic_term") {
  const Mesh m = build_plane_regular(4, 4, 1.0, std::sqrt(3.0) / 2.0);
  for (double x : kinetic_term(m, EdgeField(m.num_edges(), 0.0))) CHECK(x == 0.0);
  // equal |V| on every edge of an equilateral mesh gives a constant F
  for (double x : kinetic_term(m, EdgeField(m.num_edges(), 1.7))) CHECK(std::abs(x) < 1e-12);
  const EdgeField v = random_field<EdgeField>(m.num_edges(), 4, -1, 1);
  const EdgeField k = kinetic_term(m, v);
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    auto f = [&](int i) {
      double s = 0.0;
      for (int q = 0; q < 3; ++q) {
        const Edge &x = m.edges[m.cells[i].edges[q]];
        s += x.dual_length * x.length * v[m.cells[i].edges[q]] * v[m.cells[i].edges[q]] / (2.0 * m.cells[i].area);
      }
      return s;
    };
    const Edge &ed = m.edges[e];
    CHECK(k[e] == doctest::Approx(0.5 * (f(ed.cells[1]) - f(ed.cells[0])) / ed.dual_length));
  }
}

TEST_CASE("gradient_term") {
  const Mesh m = build_plane_regular(4, 4, 1.0, std::sqrt(3.0) / 2.0);
  const CellField eta = random_field<CellField>(m.num_cells(), 9, 0, 100);
  CellField h(m.num_cells());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = 1000.0 - eta[i];
  CHECK(max_abs(gradient_term(m, h, eta, 9.81)) < 1e-10);

  // 1 m step over |ẽ| = 1000 m
  Mesh scaled = m;
  for (auto &e : scaled.edges) e.dual_length = 1000.0;
  CellField step(m.num_cells(), 0.0);
  step[scaled.edges[0].cells[1]] = 1.0;
  const EdgeField g = gradient_term(scaled, step, CellField(), 9.81);
  CHECK(g[0] == doctest::Approx(9.81e-3));
}

TEST_CASE("continuity_flux") {
  const Mesh m = build_sphere(3, 6.37122e6);
  for (double x : continuity_flux(m, EdgeField(m.num_edges(), 0.0), CellField(m.num_cells(), 5.0))) CHECK(x == 0.0);
  for (unsigned s = 0; s < 10; ++s) {
    const EdgeField v = random_field<EdgeField>(m.num_edges(), 100 + s, -30, 30);
    const CellField h = random_field<CellField>(m.num_cells(), 200 + s, 100, 6000);
    const CellField d = continuity_flux(m, v, h);
    double total = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < m.num_cells(); ++i) {
      total += m.cells[i].area * d[i];
      scale += std::abs(m.cells[i].area * d[i]);
    }
    CHECK(std::abs(total) <= 1e-13 * scale);
  }
  const Mesh p = build_plane_regular(8, 8, 1.0, std::sqrt(3.0) / 2.0);
  const EdgeField u = ops::sample_normal(p, [](const Vec3 &) { return Vec3(2, 1, 0); });
  for (double x : continuity_flux(p, u, CellField(p.num_cells(), 3.0))) CHECK(std::abs(x) < 1e-12);
}

TEST_CASE("potential_vorticity") {
  const Mesh m = build_plane_regular(8, 8, 1.0, 1.0);
  const DualField q = potential_vorticity(m, EdgeField(m.num_edges(), 0.0), CellField(m.num_cells(), 4.0), DualField(m.num_duals(), 2.0));
  for (double x : q) CHECK(x == doctest::Approx(0.5));
  const EdgeField v = random_field<EdgeField>(m.num_edges(), 3, -1, 1);
  const CellField h = random_field<CellField>(m.num_cells(), 4, 1, 2);
  const DualField f = random_field<DualField>(m.num_duals(), 5, -1, 1);
  const DualField got = potential_vorticity(m, v, h, f);
  const DualField c = ops::curl(m, v);
  for (std::size_t z = 0; z < m.num_duals(); ++z) {
    const DualCell &d = m.duals[z];
    double hz = 0.0;
    for (std::size_t k = 0; k < d.cells.size(); ++k) hz += d.kites[k] / d.area * h[d.cells[k]];
    CHECK(got[z] == doctest::Approx((c[z] + f[z]) / hz).epsilon(1e-12));
  }
  CHECK_THROWS_AS(potential_vorticity(m, v, CellField(m.num_cells(), 0.0), f), NumericalError);
}

TEST_CASE("invariances and lake at rest") {
  const Mesh m = build_sphere(2, 6.37122e6);
  PhysicalParams p;
  const DualField f = coriolis_dual(p, m);
  const CellField eta = random_field<CellField>(m.num_cells(), 1, 0, 2000);
  CellField h(m.num_cells());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = 6000.0 - eta[i];
  const EdgeField zero(m.num_edges(), 0.0);
  CHECK(max_abs(adv_term(m, zero, h, f)) == 0.0);
  CHECK(max_abs(kinetic_term(m, zero)) == 0.0);
  CHECK(max_abs(gradient_term(m, h, eta, 9.81)) < 1e-12);

  const EdgeField v = random_field<EdgeField>(m.num_edges(), 2, -10, 10);
  CellField h2 = h, eta2 = eta;
  for (std::size_t i = 0; i < h.size(); ++i) {
    h2[i] += 50.0;
    eta2[i] -= 50.0;
  }
  const EdgeField g1 = gradient_term(m, h, eta, 9.81), g2 = gradient_term(m, h2, eta2, 9.81);
  for (std::size_t e = 0; e < m.num_edges(); ++e) CHECK(g1[e] == doctest::Approx(g2[e]).scale(1e-9));
}
