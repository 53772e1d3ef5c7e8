#include "swe/cases.hpp"

#include <algorithm>
#include <cmath>

#include "swe/errors.hpp"
#include "swe/operators.hpp"

namespace swe {

namespace {
constexpr double pi = std::numbers::pi;

void require_plane(const Mesh &mesh, const char *what) {
  if (mesh.kind != GeometryKind::PlanePeriodic) throw ConfigError(std::string(what) + " needs a periodic plane mesh");
}

void require_sphere(const Mesh &mesh, const char *what) {
  if (mesh.kind != GeometryKind::Sphere) throw ConfigError(std::string(what) + " needs a sphere mesh");
}

double latitude(const Vec3 &x) { return std::asin(std::clamp(x.z() / x.norm(), -1.0, 1.0)); }

double longitude(const Vec3 &x) {
  const double l = std::atan2(x.y(), x.x());
  return l < 0.0 ? l + 2.0 * pi : l;
}
} // namespace

CaseId parse_case_id(const std::string &name) {
  if (name == "commutator_plane") return CaseId::CommutatorPlane;
  if (name == "commutator_sphere") return CaseId::CommutatorSphere;
  if (name == "vortex_pair" || name == "vortex") return CaseId::VortexPair;
  if (name == "shear_flow" || name == "shear") return CaseId::ShearFlow;
  if (name == "mountain") return CaseId::Mountain;
  throw ConfigError("unknown case '" + name + "'");
}

std::string to_string(CaseId id) {
  switch (id) {
  case CaseId::CommutatorPlane: return "commutator_plane";
  case CaseId::CommutatorSphere: return "commutator_sphere";
  case CaseId::VortexPair: return "vortex_pair";
  case CaseId::ShearFlow: return "shear_flow";
  case CaseId::Mountain: return "mountain";
  }
  return "unknown";
}

EdgeField geostrophic_velocity_dual(const Mesh &mesh, const DualField &h_dual, const DualField &f, double g) {
  EdgeField v = ops::grad_t(mesh, h_dual);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge &ed = mesh.edges[e];
    const double fe = 0.5 * (f[ed.vertex_minus] + f[ed.vertex_plus]);
    if (fe == 0.0) throw ConfigError("geostrophic balance is undefined where f = 0");
    v[e] *= -g / fe;
  }
  return v;
}

EdgeField geostrophic_velocity(const Mesh &mesh, const CellField &h, const DualField &f, double g) {
  return geostrophic_velocity_dual(mesh, ops::cell_to_dual(mesh, h), f, g);
}

double vortex_pair_depth(double x, double y, double lx, double ly, const VortexParams &p) {
  const double sx = p.sx * lx, sy = p.sy * ly;
  auto bump = [&](double xc, double yc) {
    const double xp = lx / (pi * sx) * std::sin(pi / lx * (x - xc * lx));
    const double yp = ly / (pi * sy) * std::sin(pi / ly * (y - yc * ly));
    return std::exp(-0.5 * (xp * xp + yp * yp));
  };
  return p.H0 - p.Hp * (bump(p.xc1, p.yc1) + bump(p.xc2, p.yc2) - 4.0 * pi * sx * sy / (lx * ly));
}

double shear_flow_depth(double x, double y, double lx, double ly, const ShearParams &p) {
  const double xp = x / lx;
  const double yp = std::sin(pi / ly * (y - 0.5 * ly)) / pi;
  const double ypp = std::sin(2.0 * pi / ly * (y - 0.5 * ly)) / (2.0 * pi);
  return p.H0 - p.Hp * ypp / p.sigma_y * std::exp(-yp * yp / (2.0 * p.sigma_y * p.sigma_y) + 0.5) *
                    (1.0 - p.kappa * std::sin(2.0 * pi * xp / p.lambda_x));
}

double mountain_topography(double lon, double lat, const MountainParams &p) {
  const double dl = lon - p.lambda_c, dt = lat - p.theta_c;
  const double r = std::sqrt(std::min(p.radius * p.radius, dl * dl + dt * dt));
  return p.peak * (1.0 - r / p.radius);
}

namespace {

CaseSetup plane_geostrophic(const Mesh &mesh, CellField h, double f0, double g) {
  CaseSetup s;
  s.params.g = g;
  s.params.f0 = f0;
  const DualField f = coriolis_dual(s.params, mesh);
  s.state.V = geostrophic_velocity(mesh, h, f, g);
  s.state.h = std::move(h);
  return s;
}

} // namespace

CaseSetup init_vortex_pair(const Mesh &mesh, const VortexParams &p, double f0, double g) {
  require_plane(mesh, "vortex_pair");
  const CellField h = ops::sample_cells(mesh, [&](const Vec3 &x) { return vortex_pair_depth(x.x(), x.y(), mesh.lx, mesh.ly, p); });
  return plane_geostrophic(mesh, h, f0, g);
}

CaseSetup init_shear_flow(const Mesh &mesh, const ShearParams &p, double f0, double g) {
  require_plane(mesh, "shear_flow");
  const CellField h = ops::sample_cells(mesh, [&](const Vec3 &x) { return shear_flow_depth(x.x(), x.y(), mesh.lx, mesh.ly, p); });
  return plane_geostrophic(mesh, h, f0, g);
}

CaseSetup init_mountain(const Mesh &mesh, const MountainParams &p, double omega, double g) {
  require_sphere(mesh, "mountain");
  CaseSetup s;
  s.params.g = g;
  s.params.omega = omega;
  s.params.eta_b = ops::sample_cells(mesh, [&](const Vec3 &x) { return mountain_topography(longitude(x), latitude(x), p); });
  const double a = (mesh.radius * omega * p.u0 + 0.5 * p.u0 * p.u0) / g;
  s.state.h = ops::sample_cells(mesh, [&](const Vec3 &x) {
    const double lat = latitude(x);
    if (p.literal_profile) return p.h0 - a * std::cos(lat);
    const double sl = std::sin(lat);
    return p.h0 - a * sl * sl - mountain_topography(longitude(x), lat, p);
  });
  s.state.V = ops::sample_normal(mesh, [&](const Vec3 &x) -> Vec3 {
    const double lon = longitude(x);
    return Vec3(-std::sin(lon), std::cos(lon), 0.0) * (p.u0 * std::cos(latitude(x)));
  });
  return s;
}

CommutatorFields commutator_test_fields(const Mesh &mesh) {
  CommutatorFields c;
  if (mesh.kind == GeometryKind::PlanePeriodic) {
    const double k = 2.0 * pi / mesh.lx;
    c.U = ops::sample_normal(mesh, [k](const Vec3 &x) { return Vec3(std::sin(k * x.x()), 0, 0); });
    c.V = ops::sample_normal(mesh, [k](const Vec3 &x) { return Vec3(std::cos(k * x.x()), 0, 0); });
    c.bracket = ops::sample_normal(mesh, [k](const Vec3 &) { return Vec3(-k, 0, 0); });
  } else {
    c.U = ops::sample_normal(mesh, [](const Vec3 &x) { return Vec3(x.y(), -x.x(), 0); });
    c.V = ops::sample_normal(mesh, [](const Vec3 &x) { return Vec3(0, -x.z(), x.y()); });
    c.bracket = ops::sample_normal(mesh, [](const Vec3 &x) { return Vec3(x.z(), 0, -x.x()); });
  }
  return c;
}

DissipationConfig default_dissipation(CaseId id, DissipationMode mode) {
  DissipationConfig d;
  d.mode = mode;
  d.theta = 2.0 * constants::km4_day;
  switch (id) {
  case CaseId::VortexPair: d.nu = 1.2724e5 * constants::km4_per_day; break;
  case CaseId::ShearFlow: d.nu = 3.7145e5 * constants::km4_per_day; break;
  case CaseId::Mountain: d.nu = 8.64e7 * constants::km4_per_day; break;
  default: d.nu = 0.0; break;
  }
  return d;
}

} // namespace swe
