#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "swe/errors.hpp"

namespace swe::app {

namespace {

constexpr double day = 86400.0;

std::string trim(const std::string &s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string &v, const std::string &where) {
  errno = 0;
  char *end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x)) throw ConfigError(where + ": expected a number, got '" + v + "'");
  return x;
}

long to_long(const std::string &v, const std::string &where) {
  errno = 0;
  char *end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) throw ConfigError(where + ": expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string &v, const std::string &where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(where + ": expected true or false, got '" + v + "'");
}

MeshKind parse_mesh_kind(const std::string &v, const std::string &where) {
  if (v == "plane") return MeshKind::Plane;
  if (v == "plane_irregular" || v == "plane-irregular") return MeshKind::PlaneIrregular;
  if (v == "sphere") return MeshKind::Sphere;
  throw ConfigError(where + ": unknown mesh kind '" + v + "'");
}

std::string to_string(MeshKind k) {
  switch (k) {
  case MeshKind::Plane: return "plane";
  case MeshKind::PlaneIrregular: return "plane_irregular";
  case MeshKind::Sphere: return "sphere";
  }
  return "plane";
}

struct Entry {
  int line;
  std::string section, key, value;
  [[nodiscard]] std::string where(const std::string &origin) const {
    return origin + ":" + std::to_string(line) + " [" + section + "] " + key;
  }
};

using Setter = std::function<void(SimConfig &, const std::string &value, const std::string &where)>;

Setter num(double scale, double SimConfig::*field) {
  return [=](SimConfig &c, const std::string &v, const std::string &w) { c.*field = scale * to_double(v, w); };
}

template <class P> Setter param(P SimConfig::*group, double P::*field, double scale = 1.0) {
  return [=](SimConfig &c, const std::string &v, const std::string &w) { (c.*group).*field = scale * to_double(v, w); };
}

const std::map<std::string, Setter> &setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["case.name"] = [](SimConfig &, const std::string &, const std::string &) {};
    // vortex pair
    t["case.H0_m"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      const double x = to_double(v, w);
      c.vortex.H0 = x;
      c.shear.H0 = x;
    };
    t["case.Hp_m"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      const double x = to_double(v, w);
      c.vortex.Hp = x;
      c.shear.Hp = x;
    };
    t["case.xc1"] = param(&SimConfig::vortex, &VortexParams::xc1);
    t["case.yc1"] = param(&SimConfig::vortex, &VortexParams::yc1);
    t["case.xc2"] = param(&SimConfig::vortex, &VortexParams::xc2);
    t["case.yc2"] = param(&SimConfig::vortex, &VortexParams::yc2);
    t["case.sx"] = param(&SimConfig::vortex, &VortexParams::sx);
    t["case.sy"] = param(&SimConfig::vortex, &VortexParams::sy);
    // shear flow
    t["case.lambda_x"] = param(&SimConfig::shear, &ShearParams::lambda_x);
    t["case.sigma_y"] = param(&SimConfig::shear, &ShearParams::sigma_y);
    t["case.kappa"] = param(&SimConfig::shear, &ShearParams::kappa);
    // mountain
    t["case.u0_m_per_s"] = param(&SimConfig::mountain, &MountainParams::u0);
    t["case.h0_m"] = param(&SimConfig::mountain, &MountainParams::h0);
    t["case.lambda_c_rad"] = param(&SimConfig::mountain, &MountainParams::lambda_c);
    t["case.theta_c_rad"] = param(&SimConfig::mountain, &MountainParams::theta_c);
    t["case.mountain_radius_rad"] = param(&SimConfig::mountain, &MountainParams::radius);
    t["case.mountain_peak_m"] = param(&SimConfig::mountain, &MountainParams::peak);
    t["case.literal_profile"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.mountain.literal_profile = to_bool(v, w);
    };

    t["mesh.kind"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.mesh.kind = parse_mesh_kind(v, w); };
    t["mesh.nx"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.mesh.nx = static_cast<int>(to_long(v, w)); };
    t["mesh.ny"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.mesh.ny = static_cast<int>(to_long(v, w)); };
    t["mesh.triangles"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      const long n = to_long(v, w);
      if (c.mesh.kind == MeshKind::Sphere) {
        int level = 0;
        while (20L << (2 * level) < n && level < 12) ++level;
        if (20L << (2 * level) != n) throw ConfigError(w + ": sphere meshes have 20 * 4^level triangles");
        c.mesh.level = level;
      } else {
        const long side = std::lround(std::sqrt(n / 2.0));
        if (2 * side * side != n) throw ConfigError(w + ": plane meshes here have 2 n^2 triangles");
        c.mesh.nx = c.mesh.ny = static_cast<int>(side);
      }
    };
    t["mesh.level"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.mesh.level = static_cast<int>(to_long(v, w)); };
    t["mesh.Lx_m"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.mesh.lx = to_double(v, w); };
    t["mesh.Ly_m"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.mesh.ly = to_double(v, w); };
    t["mesh.Lx_km"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.mesh.lx = 1e3 * to_double(v, w); };
    t["mesh.Ly_km"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.mesh.ly = 1e3 * to_double(v, w); };
    t["mesh.jitter"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.mesh.irregular.jitter = to_double(v, w); };
    t["mesh.refinement_factor"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.mesh.irregular.refinement_factor = to_double(v, w);
    };
    t["mesh.inner_radius"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.mesh.irregular.inner_radius = to_double(v, w);
    };
    t["mesh.seed"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.mesh.irregular.seed = static_cast<std::uint64_t>(to_long(v, w));
    };

    t["physics.f_per_s"] = num(1.0, &SimConfig::f0);
    t["physics.g_m_per_s2"] = num(1.0, &SimConfig::g);
    t["physics.R_m"] = num(1.0, &SimConfig::radius);
    t["physics.Omega_per_s"] = num(1.0, &SimConfig::omega);

    t["dissipation.mode"] = [](SimConfig &, const std::string &, const std::string &) {};
    t["dissipation.theta_m4_s"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.diss.theta = to_double(v, w); };
    t["dissipation.theta_km4_day"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.diss.theta = constants::km4_day * to_double(v, w);
    };
    t["dissipation.nu_m4_per_s"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.diss.nu = to_double(v, w); };
    t["dissipation.nu_km4_per_day"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.diss.nu = constants::km4_per_day * to_double(v, w);
    };

    t["time.dt_s"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.time.dt = to_double(v, w); };
    t["time.cfl"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.time.cfl = to_double(v, w); };
    t["time.t_end_s"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.time.t_end = to_double(v, w); };
    t["time.t_end_days"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.time.t_end = day * to_double(v, w); };
    t["time.fp_tol_m_per_s"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.time.fp_tol = to_double(v, w); };
    t["time.fp_max_iter"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.time.fp_max_iter = static_cast<int>(to_long(v, w));
    };
    t["time.lin_tol"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.time.lin_tol = to_double(v, w); };

    t["output.diag_every_steps"] = [](SimConfig &c, const std::string &v, const std::string &w) { c.output.diag_every = to_long(v, w); };
    t["output.snapshot_every_steps"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.output.snapshot_every = to_long(v, w);
    };
    t["output.checkpoint_every_steps"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.output.checkpoint_every = to_long(v, w);
    };
    t["output.spectra_every_steps"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.output.spectra_every = to_long(v, w);
    };
    t["output.spectra_grid"] = [](SimConfig &c, const std::string &v, const std::string &w) {
      c.output.spectra_grid = static_cast<int>(to_long(v, w));
    };
    return t;
  }();
  return table;
}

std::vector<Entry> tokenize(const std::string &text, const std::string &origin) {
  std::vector<Entry> out;
  std::istringstream in(text);
  std::string line, section;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(origin + ":" + std::to_string(no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ":" + std::to_string(no) + ": expected key = value");
    if (section.empty()) throw ConfigError(origin + ":" + std::to_string(no) + ": key outside of a section");
    out.push_back({no, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return out;
}

void check(const SimConfig &c) {
  validate(c.time);
  if (c.mesh.kind != MeshKind::Sphere && (c.mesh.nx < 2 || c.mesh.ny < 2)) throw ConfigError("mesh nx and ny must be >= 2");
  if (c.mesh.kind == MeshKind::Sphere && (c.mesh.level < 0 || c.mesh.level > 10)) throw ConfigError("sphere level must be in [0, 10]");
  if (!(c.mesh.lx > 0.0) || !(c.mesh.ly > 0.0)) throw ConfigError("domain lengths must be positive");
  if (!(c.g > 0.0)) throw ConfigError("g must be positive");
  if (!(c.radius > 0.0)) throw ConfigError("R must be positive");
  if (c.diss.theta < 0.0 || c.diss.nu < 0.0) throw ConfigError("dissipation coefficients must be >= 0");
  if (c.vortex.sx <= 0.0 || c.vortex.sy <= 0.0) throw ConfigError("sx and sy must be positive");
  if (c.shear.sigma_y <= 0.0 || c.shear.lambda_x <= 0.0) throw ConfigError("sigma_y and lambda_x must be positive");
  if (c.output.spectra_grid < 2) throw ConfigError("spectra_grid must be >= 2");
  const bool sphere_case = c.case_id == CaseId::Mountain || c.case_id == CaseId::CommutatorSphere;
  if (sphere_case != (c.mesh.kind == MeshKind::Sphere))
    throw ConfigError("case " + swe::to_string(c.case_id) + " does not run on a " + to_string(c.mesh.kind) + " mesh");
}

} // namespace

DissipationMode parse_mode(const std::string &s) {
  if (s == "none") return DissipationMode::None;
  if (s == "casimir") return DissipationMode::Casimir;
  if (s == "biharmonic") return DissipationMode::Biharmonic;
  throw ConfigError("unknown dissipation mode '" + s + "' (expected none, casimir or biharmonic)");
}

std::string to_string(DissipationMode m) {
  switch (m) {
  case DissipationMode::None: return "none";
  case DissipationMode::Casimir: return "casimir";
  case DissipationMode::Biharmonic: return "biharmonic";
  }
  return "none";
}

SimConfig default_config(CaseId id) {
  SimConfig c;
  c.case_id = id;
  c.diss = default_dissipation(id, DissipationMode::None);
  c.time.t_end = 10.0 * day;
  switch (id) {
  case CaseId::VortexPair: c.mesh.nx = c.mesh.ny = 64; break;
  case CaseId::ShearFlow: c.mesh.nx = c.mesh.ny = 128; break;
  case CaseId::Mountain:
  case CaseId::CommutatorSphere:
    c.mesh.kind = MeshKind::Sphere;
    c.mesh.level = 5;
    c.time.t_end = 15.0 * day;
    break;
  case CaseId::CommutatorPlane: break;
  }
  return c;
}

SimConfig parse_config(const std::string &text, const std::string &origin) {
  const std::vector<Entry> entries = tokenize(text, origin);
  CaseId id = CaseId::VortexPair;
  DissipationMode mode = DissipationMode::None;
  std::map<std::string, int> seen;
  for (const Entry &e : entries) {
    const std::string full = e.section + "." + e.key;
    if (!setters().count(full)) throw ConfigError(e.where(origin) + ": unknown key");
    if (seen.count(full)) throw ConfigError(e.where(origin) + ": duplicate key (first set on line " + std::to_string(seen[full]) + ")");
    seen[full] = e.line;
    try {
      if (full == "case.name") id = parse_case_id(e.value);
      if (full == "dissipation.mode") mode = parse_mode(e.value);
    } catch (const ConfigError &err) {
      throw ConfigError(e.where(origin) + ": " + err.what());
    }
  }
  SimConfig c = default_config(id);
  c.diss.mode = mode;
  // mesh.kind must be known before mesh.triangles is interpreted
  for (const Entry &e : entries)
    if (e.section + "." + e.key == "mesh.kind") setters().at("mesh.kind")(c, e.value, e.where(origin));
  for (const Entry &e : entries) setters().at(e.section + "." + e.key)(c, e.value, e.where(origin));
  check(c);
  return c;
}

SimConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string dump_config(const SimConfig &c) {
  std::string out;
  char buf[128];
  auto kv = [&](const char *key, double v) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
    out += buf;
  };
  auto kl = [&](const char *key, long v) { out += std::string(key) + " = " + std::to_string(v) + "\n"; };
  out += "[case]\nname = " + swe::to_string(c.case_id) + "\n";
  switch (c.case_id) {
  case CaseId::VortexPair:
    kv("H0_m", c.vortex.H0), kv("Hp_m", c.vortex.Hp), kv("xc1", c.vortex.xc1), kv("yc1", c.vortex.yc1);
    kv("xc2", c.vortex.xc2), kv("yc2", c.vortex.yc2), kv("sx", c.vortex.sx), kv("sy", c.vortex.sy);
    break;
  case CaseId::ShearFlow:
    kv("H0_m", c.shear.H0), kv("Hp_m", c.shear.Hp), kv("lambda_x", c.shear.lambda_x), kv("sigma_y", c.shear.sigma_y);
    kv("kappa", c.shear.kappa);
    break;
  case CaseId::Mountain:
    kv("u0_m_per_s", c.mountain.u0), kv("h0_m", c.mountain.h0), kv("lambda_c_rad", c.mountain.lambda_c);
    kv("theta_c_rad", c.mountain.theta_c), kv("mountain_radius_rad", c.mountain.radius), kv("mountain_peak_m", c.mountain.peak);
    out += std::string("literal_profile = ") + (c.mountain.literal_profile ? "true" : "false") + "\n";
    break;
  default: break;
  }
  out += "\n[mesh]\nkind = " + to_string(c.mesh.kind) + "\n";
  if (c.mesh.kind == MeshKind::Sphere) {
    kl("level", c.mesh.level);
  } else {
    kl("nx", c.mesh.nx), kl("ny", c.mesh.ny), kv("Lx_m", c.mesh.lx), kv("Ly_m", c.mesh.ly);
    if (c.mesh.kind == MeshKind::PlaneIrregular) {
      kv("jitter", c.mesh.irregular.jitter), kv("refinement_factor", c.mesh.irregular.refinement_factor);
      kv("inner_radius", c.mesh.irregular.inner_radius), kl("seed", static_cast<long>(c.mesh.irregular.seed));
    }
  }
  out += "\n[physics]\n";
  kv("f_per_s", c.f0), kv("g_m_per_s2", c.g), kv("R_m", c.radius), kv("Omega_per_s", c.omega);
  out += "\n[dissipation]\nmode = " + to_string(c.diss.mode) + "\n";
  kv("theta_m4_s", c.diss.theta), kv("nu_m4_per_s", c.diss.nu);
  out += "\n[time]\n";
  kv("dt_s", c.time.dt), kv("cfl", c.time.cfl), kv("t_end_s", c.time.t_end), kv("fp_tol_m_per_s", c.time.fp_tol);
  kl("fp_max_iter", c.time.fp_max_iter), kv("lin_tol", c.time.lin_tol);
  out += "\n[output]\n";
  kl("diag_every_steps", c.output.diag_every), kl("snapshot_every_steps", c.output.snapshot_every);
  kl("checkpoint_every_steps", c.output.checkpoint_every), kl("spectra_every_steps", c.output.spectra_every);
  kl("spectra_grid", c.output.spectra_grid);
  return out;
}

Mesh build_mesh(const SimConfig &c) {
  switch (c.mesh.kind) {
  case MeshKind::Plane: return build_plane_regular(c.mesh.nx, c.mesh.ny, c.mesh.lx, c.mesh.ly);
  case MeshKind::PlaneIrregular: return build_plane_irregular(c.mesh.nx, c.mesh.ny, c.mesh.lx, c.mesh.ly, c.mesh.irregular);
  case MeshKind::Sphere: return build_sphere(c.mesh.level, c.radius);
  }
  throw ConfigError("unknown mesh kind");
}

CaseSetup build_case(const SimConfig &c, const Mesh &mesh) {
  switch (c.case_id) {
  case CaseId::VortexPair: return init_vortex_pair(mesh, c.vortex, c.f0, c.g);
  case CaseId::ShearFlow: return init_shear_flow(mesh, c.shear, c.f0, c.g);
  case CaseId::Mountain: return init_mountain(mesh, c.mountain, c.omega, c.g);
  default: throw ConfigError("case " + swe::to_string(c.case_id) + " has no time-dependent run; use convergence-commutator");
  }
}

} // namespace swe::app
