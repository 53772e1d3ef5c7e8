#include <string>

#include "config.hpp"
#include "doctest.h"
#include "swe/errors.hpp"

using namespace swe;
using namespace swe::app;

TEST_CASE("defaults per case") {
  const SimConfig v = parse_config("");
  CHECK(v.case_id == CaseId::VortexPair);
  CHECK(v.mesh.nx == 64);
  CHECK(v.diss.mode == DissipationMode::None);
  CHECK(v.diss.theta == doctest::Approx(1.728e17));
  CHECK(v.time.t_end == 864000.0);
  const SimConfig m = parse_config("[case]\nname = mountain\n");
  CHECK(m.mesh.kind == MeshKind::Sphere);
  CHECK(m.mesh.level == 5);
}

TEST_CASE("units are converted from the key suffix") {
  const SimConfig c = parse_config(R"(
# shear flow at desk scale
[case]
name = shear_flow
kappa = 0.2      # stronger perturbation

[mesh]
triangles = 8192
Lx_km = 5000
Ly_km = 4330

[dissipation]
mode = biharmonic
nu_km4_per_day = 3.7145e5
theta_km4_day = 2

[time]
dt_s = 120
t_end_days = 1.5
)");
  CHECK(c.case_id == CaseId::ShearFlow);
  CHECK(c.shear.kappa == 0.2);
  CHECK(c.mesh.nx == 64);
  CHECK(c.mesh.ly == 4.33e6);
  CHECK(c.diss.mode == DissipationMode::Biharmonic);
  CHECK(c.diss.nu == doctest::Approx(3.7145e5 * 1e12 / 86400.0));
  CHECK(c.diss.theta == doctest::Approx(2.0 * 1e12 * 86400.0));
  CHECK(c.time.dt == 120.0);
  CHECK(c.time.t_end == doctest::Approx(1.5 * 86400.0));
}

TEST_CASE("sphere sizes") {
  CHECK(parse_config("[case]\nname = mountain\n[mesh]\nkind = sphere\ntriangles = 20480\n").mesh.level == 5);
  CHECK(parse_config("[case]\nname = mountain\n[mesh]\ntriangles = 1280\n").mesh.level == 3);
  CHECK_THROWS_AS(parse_config("[case]\nname = mountain\n[mesh]\ntriangles = 1000\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[mesh]\ntriangles = 1000\n"), ConfigError);
}

TEST_CASE("dump and parse round trip") {
  for (const char *name : {"vortex_pair", "shear_flow", "mountain"}) {
    SimConfig c = default_config(parse_case_id(name));
    c.diss.mode = DissipationMode::Casimir;
    c.time.dt = 77.5;
    c.output.snapshot_every = 12;
    c.mountain.literal_profile = true;
    const std::string text = dump_config(c);
    const SimConfig back = parse_config(text);
    CHECK(dump_config(back) == text);
    CHECK(back.diss.mode == DissipationMode::Casimir);
    CHECK(back.time.dt == 77.5);
  }
  SimConfig irr = default_config(CaseId::VortexPair);
  irr.mesh.kind = MeshKind::PlaneIrregular;
  irr.mesh.irregular.jitter = 0.125;
  irr.mesh.irregular.seed = 9;
  const SimConfig back = parse_config(dump_config(irr));
  CHECK(back.mesh.irregular.jitter == 0.125);
  CHECK(back.mesh.irregular.seed == 9);
}

TEST_CASE("errors name the line and key") {
  auto message = [](const std::string &text) {
    try {
      parse_config(text, "run.ini");
    } catch (const ConfigError &e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("[time]\ndt = 5\n").find("run.ini:2 [time] dt: unknown key") != std::string::npos);
  CHECK(message("[time]\n\ndt_s = fast\n").find("run.ini:3 [time] dt_s: expected a number") != std::string::npos);
  CHECK(message("[time]\ndt_s = 1\ndt_s = 2\n").find("duplicate key") != std::string::npos);
  CHECK(message("dt_s = 1\n").find("outside of a section") != std::string::npos);
  CHECK(message("[time\n").find("malformed section") != std::string::npos);
  CHECK(message("[time]\njust words\n").find("expected key = value") != std::string::npos);
  CHECK(message("[dissipation]\nmode = strong\n").find("unknown dissipation mode") != std::string::npos);
  CHECK(message("[case]\nname = mountain\n[mesh]\nkind = plane\n").find("does not run on") != std::string::npos);
  CHECK(message("[time]\nfp_max_iter = 0\n").find("iteration limit") != std::string::npos);
  CHECK(message("[time]\ndt_s = -3\n").find("time step") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/run.ini"), ConfigError);
}

TEST_CASE("mode names") {
  for (DissipationMode m : {DissipationMode::None, DissipationMode::Casimir, DissipationMode::Biharmonic})
    CHECK(parse_mode(to_string(m)) == m);
  CHECK_THROWS_AS(parse_mode("Casimir"), ConfigError);
}
