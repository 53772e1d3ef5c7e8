#pragma once

#include <numbers>
#include <string>

#include "swe/dissipation.hpp"
#include "swe/dynamics.hpp"

/// Benchmark initial conditions and analytic reference fields.
namespace swe {

namespace constants {
inline constexpr double plane_lx = 5.0e6;     // m
inline constexpr double plane_ly = 4.33e6;    // m
inline constexpr double plane_f = 6.147e-5;   // 1/s
inline constexpr double earth_radius = 6.37122e6;
inline constexpr double earth_omega = 7.292e-5;
inline constexpr double gravity = 9.81;
inline constexpr double km4_per_day = 1.0e12 / 86400.0; // m^4/s
inline constexpr double km4_day = 1.0e12 * 86400.0;     // m^4 s
} // namespace constants

enum class CaseId { CommutatorPlane, CommutatorSphere, VortexPair, ShearFlow, Mountain };

CaseId parse_case_id(const std::string &name);
std::string to_string(CaseId id);

/// Two Gaussian vortices on the doubly periodic plane. Centres and widths
/// are fractions of (Lx, Ly).
struct VortexParams {
  double H0 = 750.0;
  double Hp = 75.0;
  double xc1 = 0.4, yc1 = 0.4;
  double xc2 = 0.6, yc2 = 0.6;
  double sx = 3.0 / 40.0, sy = 3.0 / 40.0;
};

/// Unstable zonal jet; lambda_x and sigma_y are non-dimensional.
struct ShearParams {
  double H0 = 1076.0;
  double Hp = 30.0;
  double lambda_x = 0.5;
  double sigma_y = 1.0 / 12.0;
  double kappa = 0.1;
};

/// Zonal flow over a conical mountain on the sphere.
struct MountainParams {
  double u0 = 20.0;
  double h0 = 5960.0;
  double lambda_c = 1.5 * std::numbers::pi;
  double theta_c = std::numbers::pi / 6.0;
  double radius = std::numbers::pi / 9.0;
  double peak = 2000.0;
  /// false: balanced surface h + eta_b = h0 - (R Omega u0 + u0^2/2) sin^2(lat) / g.
  /// true: depth h0 - (R Omega u0 + u0^2/2) cos(lat) / g, ignoring eta_b.
  bool literal_profile = false;
};

/// Initial state plus the physical parameters it was built for.
struct CaseSetup {
  State state;
  PhysicalParams params;
};

/// V = -(g/f) Grad_t(h_zeta), with h_zeta the kite-weighted dual value of h.
EdgeField geostrophic_velocity(const Mesh &mesh, const CellField &h, const DualField &f, double g);
/// Same with h already given on dual vertices.
EdgeField geostrophic_velocity_dual(const Mesh &mesh, const DualField &h_dual, const DualField &f, double g);

/// Analytic depths; x, y in metres.
double vortex_pair_depth(double x, double y, double lx, double ly, const VortexParams &p);
double shear_flow_depth(double x, double y, double lx, double ly, const ShearParams &p);
/// Cone height at longitude lon in [0, 2 pi) and latitude lat.
double mountain_topography(double lon, double lat, const MountainParams &p);

CaseSetup init_vortex_pair(const Mesh &mesh, const VortexParams &p, double f0 = constants::plane_f,
                           double g = constants::gravity);
CaseSetup init_shear_flow(const Mesh &mesh, const ShearParams &p, double f0 = constants::plane_f,
                          double g = constants::gravity);
CaseSetup init_mountain(const Mesh &mesh, const MountainParams &p, double omega = constants::earth_omega,
                        double g = constants::gravity);

/// Edge-normal samples of two vector fields and of their bracket
/// u.grad v - v.grad u at edge midpoints. Plane: u = (sin kx, 0),
/// v = (cos kx, 0), bracket (-k, 0) with k = 2 pi / Lx. Sphere (positions
/// in metres): u = (y, -x, 0), v = (0, -z, y), bracket (z, 0, -x).
struct CommutatorFields {
  EdgeField U;
  EdgeField V;
  EdgeField bracket;
};
CommutatorFields commutator_test_fields(const Mesh &mesh);

/// Default dissipation coefficients for a case, SI units.
DissipationConfig default_dissipation(CaseId id, DissipationMode mode);

} // namespace swe
