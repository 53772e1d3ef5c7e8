#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "matrix_oracle.hpp"
#include "swe/dissipation.hpp"
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

double enstrophy_of(const Mesh &m, const EdgeField &V, const CellField &h, const DualField &f) {
  const DualField q = potential_vorticity(m, V, h, f), hz = ops::cell_to_dual(m, h);
  double c = 0.0;
  for (std::size_t z = 0; z < m.num_duals(); ++z) c += 0.5 * hz[z] * q[z] * q[z] * m.duals[z].area;
  return c;
}

// A smooth, balanced vortex-pair-like state on the f-plane.
struct PlaneState {
  Mesh mesh;
  EdgeField V;
  CellField h;
  DualField f;
};

PlaneState vortex_state(int n) {
  const double lx = 5.0e6, ly = 4.33e6, f0 = 6.147e-5, g = 9.81;
  PlaneState s{build_plane_regular(n, n, lx, ly), {}, {}, {}};
  auto depth = [&](const Vec3 &x) {
    auto bump = [&](double xc, double yc) {
      const double xp = lx / (std::numbers::pi * 0.075 * lx) * std::sin(std::numbers::pi / lx * (x.x() - xc));
      const double yp = ly / (std::numbers::pi * 0.075 * ly) * std::sin(std::numbers::pi / ly * (x.y() - yc));
      return std::exp(-0.5 * (xp * xp + yp * yp));
    };
    return 750.0 - 75.0 * (bump(0.4 * lx, 0.4 * ly) + bump(0.6 * lx, 0.6 * ly));
  };
  s.h = ops::sample_cells(s.mesh, depth);
  s.V = ops::grad_t(s.mesh, ops::sample_duals(s.mesh, depth));
  s.V *= -g / f0;
  s.f = DualField(s.mesh.num_duals(), f0);
  return s;
}

} // namespace

TEST_CASE("casimir_gradient") {
  const Mesh m = build_plane_regular(4, 4, 1.0, std::sqrt(3.0) / 2.0);
  const CellField h1(m.num_cells(), 1.0);
  for (double d : casimir_gradient(m, DualField(m.num_duals(), 0.7), h1)) CHECK(d == 0.0);

  SUBCASE("two-point value on unit geometry") {
    DualField q(m.num_duals(), 0.0);
    const Edge &ed = m.edges[0];
    q[ed.vertex_plus] = 0.3;
    q[ed.vertex_minus] = 1.1;
    const EdgeField d = casimir_gradient(m, q, h1);
    CHECK(d[0] == doctest::Approx(2.0 * (1.1 - 0.3) / ed.length));
  }

  SUBCASE("half of D̃ is the exact derivative of the discrete enstrophy") {
    const Mesh mm = build_plane_regular(8, 8, 1.0, 1.0);
    const EdgeField V = random_field<EdgeField>(mm.num_edges(), 1, -1, 1);
    const CellField h = random_field<CellField>(mm.num_cells(), 2, 1, 2);
    const DualField f = random_field<DualField>(mm.num_duals(), 3, -1, 1);
    const EdgeField dV = random_field<EdgeField>(mm.num_edges(), 4, -1, 1);
    const EdgeField d = casimir_gradient(mm, potential_vorticity(mm, V, h, f), h);
    const EdgeField hbar = ops::edge_average(mm, h);
    // <δC/δM, δM>_1 with δM = h̄ δA♭ reduces to sum |e||ẽ| h̄ D δV
    double predicted = 0.0;
    for (std::size_t e = 0; e < mm.num_edges(); ++e)
      predicted += mm.edges[e].length * mm.edges[e].dual_length * hbar[e] * 0.5 * d[e] * dV[e];
    const double eps = 1e-6;
    EdgeField vp = V, vm = V;
    vp.axpy(eps, dV);
    vm.axpy(-eps, dV);
    const double fd = (enstrophy_of(mm, vp, h, f) - enstrophy_of(mm, vm, h, f)) / (2 * eps);
    CHECK(predicted == doctest::Approx(fd).epsilon(1e-7));
  }

  SUBCASE("non-positive depth faults") {
    CellField h = h1;
    h[3] = -2.0;
    CHECK_THROWS_AS(casimir_gradient(m, DualField(m.num_duals(), 1.0), h), NumericalError);
  }
}

TEST_CASE("discrete_commutator") {
  const Mesh m = build_plane_regular(8, 8, 1.0, 1.0);
  const EdgeField U = random_field<EdgeField>(m.num_edges(), 5, -1, 1);
  const EdgeField V = random_field<EdgeField>(m.num_edges(), 6, -1, 1);
  SUBCASE("[U, U] = 0 exactly") {
    for (double w : discrete_commutator(m, U, U)) CHECK(w == 0.0);
  }
  SUBCASE("antisymmetry") {
    const EdgeField a = discrete_commutator(m, U, V), b = discrete_commutator(m, V, U);
    for (std::size_t e = 0; e < m.num_edges(); ++e) CHECK(a[e] == -b[e]);
  }
  SUBCASE("plane test fields approximate u.grad v - v.grad u = (-2 pi / Lx, 0)") {
    const double lx = 5.0e6, ly = 4.33e6;
    double prev = 1e300;
    for (int n : {16, 32, 64}) {
      const Mesh pm = build_plane_regular(n, n, lx, ly);
      const double k = 2.0 * std::numbers::pi / lx;
      const EdgeField u = ops::sample_normal(pm, [&](const Vec3 &x) { return Vec3(std::sin(k * x.x()), 0, 0); });
      const EdgeField v = ops::sample_normal(pm, [&](const Vec3 &x) { return Vec3(std::cos(k * x.x()), 0, 0); });
      const EdgeField w = discrete_commutator(pm, u, v);
      double err = 0.0, ref = 0.0;
      for (std::size_t e = 0; e < pm.num_edges(); ++e) {
        const double exact = -k * pm.edges[e].normal.x();
        err = std::max(err, std::abs(w[e] - exact));
        ref = std::max(ref, std::abs(exact));
      }
      CHECK(err / ref < 0.5);
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("lie_projection matches the dense projected Lie derivative") {
  unsigned seed = 40;
  for (const Mesh &m : oracle_meshes()) {
    const EdgeField V = random_field<EdgeField>(m.num_edges(), ++seed, -1, 1);
    const EdgeField W = random_field<EdgeField>(m.num_edges(), ++seed, -1, 1);
    const CellField h = random_field<CellField>(m.num_cells(), ++seed, 1, 2);
    EdgeField minus_w = W;
    minus_w *= -1.0; // W_ij = +|e| W̃ / (2 Omega_ii) is the velocity matrix of -W̃
    const oracle::Mat x = oracle::row_scale(h, oracle::flat_full(m, minus_w));
    const EdgeField ref = oracle::project(m, oracle::lie(oracle::areas(m), oracle::velocity_matrix(m, V), x));
    const EdgeField got = lie_projection(m, V, h, W);
    for (std::size_t e = 0; e < m.num_edges(); ++e) CHECK(std::abs(got[e] - ref[e]) < 1e-12 * max_abs(ref));
  }
}

TEST_CASE("lie_projection trivial inputs") {
  const Mesh m = build_plane_regular(4, 4, 1.0, std::sqrt(3.0) / 2.0);
  const EdgeField V = random_field<EdgeField>(m.num_edges(), 1, -1, 1);
  const CellField h = random_field<CellField>(m.num_cells(), 2, 1, 2);
  for (double x : lie_projection(m, V, h, EdgeField(m.num_edges(), 0.0))) CHECK(x == 0.0);
  for (double x : lie_projection(m, EdgeField(m.num_edges(), 0.0), h, V)) CHECK(x == 0.0);
}

TEST_CASE("energy neutrality: sum |e| L V = 0 for arbitrary W̃") {
  unsigned seed = 70;
  IrregularPlaneOptions o;
  o.refinement_factor = 2.0;
  o.jitter = 0.1;
  for (const Mesh &m : {build_plane_regular(16, 16, 5.0e6, 4.33e6), build_plane_irregular(16, 16, 5.0e6, 4.33e6, o),
                        build_sphere(3, 6.37122e6)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const EdgeField V = random_field<EdgeField>(m.num_edges(), ++seed, -20, 20);
      const EdgeField W = random_field<EdgeField>(m.num_edges(), ++seed, -1, 1);
      const CellField h = random_field<CellField>(m.num_cells(), ++seed, 500, 1000);
      const EdgeField l = lie_projection(m, V, h, W);
      double pairing = 0.0, scale = 0.0;
      for (std::size_t e = 0; e < m.num_edges(); ++e) {
        pairing += m.edges[e].length * l[e] * V[e];
        scale += std::abs(m.edges[e].length * l[e] * V[e]);
      }
      CHECK(std::abs(pairing) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("casimir_tendency") {
  const PlaneState s = vortex_state(32);
  const Mesh &m = s.mesh;
  SUBCASE("theta = 0 gives zero") {
    for (double x : casimir_tendency(m, s.V, s.h, s.f, 0.0)) CHECK(x == 0.0);
  }
  SUBCASE("uniform q gives zero") {
    const CellField h(m.num_cells(), 750.0);
    for (double x : casimir_tendency(m, EdgeField(m.num_edges(), 0.0), h, s.f, 1e17)) CHECK(x == 0.0);
  }
  SUBCASE("enstrophy decreases and energy is untouched") {
    const double theta = 1.728e17;
    const EdgeField t = casimir_tendency(m, s.V, s.h, s.f, theta);
    REQUIRE(max_abs(t) > 0.0);
    const DualField q = potential_vorticity(m, s.V, s.h, s.f);
    const EdgeField gq = ops::grad_t(m, q);
    const EdgeField hbar = ops::edge_average(m, s.h);
    double dc = 0.0, dk = 0.0, kscale = 0.0;
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
      const double w = m.edges[e].length * m.edges[e].dual_length;
      dc += w * gq[e] * t[e];
      dk += w * hbar[e] * s.V[e] * t[e];
      kscale += std::abs(w * hbar[e] * s.V[e] * t[e]);
    }
    CHECK(dc < 0.0);
    CHECK(std::abs(dk) <= 1e-10 * kscale);
  }
}

TEST_CASE("biharmonic") {
  const Mesh m = build_plane_regular(16, 16, 1.0, 1.0);
  for (double x : biharmonic_tendency(m, EdgeField(m.num_edges(), 0.0), 3.0)) CHECK(x == 0.0);
  SUBCASE("constant vector field is in the kernel") {
    const EdgeField v = ops::sample_normal(m, [](const Vec3 &) { return Vec3(1.5, -0.5, 0.0); });
    CHECK(max_abs(vector_laplacian(m, v)) < 1e-10);
    CHECK(max_abs(biharmonic_tendency(m, v, 1.0)) < 1e-6);
  }
  SUBCASE("matches composed operators") {
    const EdgeField v = random_field<EdgeField>(m.num_edges(), 8, -1, 1);
    const double nu = 2.5;
    const EdgeField got = biharmonic_tendency(m, v, nu);
    EdgeField lap(m.num_edges()), lap2(m.num_edges());
    const CellField d1 = ops::div(m, v);
    const DualField c1 = ops::curl(m, v);
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
      const Edge &ed = m.edges[e];
      lap[e] = (d1[ed.cells[1]] - d1[ed.cells[0]]) / ed.dual_length - (c1[ed.vertex_minus] - c1[ed.vertex_plus]) / ed.length;
    }
    const CellField d2 = ops::div(m, lap);
    const DualField c2 = ops::curl(m, lap);
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
      const Edge &ed = m.edges[e];
      lap2[e] = (d2[ed.cells[1]] - d2[ed.cells[0]]) / ed.dual_length - (c2[ed.vertex_minus] - c2[ed.vertex_plus]) / ed.length;
      CHECK(got[e] == doctest::Approx(-nu * lap2[e]).epsilon(1e-12));
    }
  }
  SUBCASE("dissipates kinetic energy for random V (100 samples)") {
    for (unsigned k = 0; k < 100; ++k) {
      const EdgeField v = random_field<EdgeField>(m.num_edges(), 1000 + k, -1, 1);
      CHECK(ops::ip_edge(m, biharmonic_tendency(m, v, 1.0), v) < 0.0);
    }
  }
}
