#include "swe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <memory>

#include <fftw3.h>

#include "swe/errors.hpp"
#include "swe/operators.hpp"

namespace swe {

double kinetic_energy(const Mesh &mesh, const State &state) {
  double ke = 0.0;
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    const Cell &c = mesh.cells[i];
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Edge &ed = mesh.edges[c.edges[k]];
      const double v = state.V[c.edges[k]];
      s += ed.length * ed.dual_length * v * v;
    }
    ke += 0.25 * state.h[i] * s;
  }
  return ke;
}

double energy(const Mesh &mesh, const State &state, const PhysicalParams &params) {
  double pe = 0.0;
  const bool has_b = !params.eta_b.empty();
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    const double s = state.h[i] + (has_b ? params.eta_b[i] : 0.0);
    pe += 0.5 * params.g * s * s * mesh.cells[i].area;
  }
  return pe + kinetic_energy(mesh, state);
}

double enstrophy(const Mesh &mesh, const State &state, const DualField &f) {
  const DualField c = ops::curl(mesh, state.V);
  const DualField hz = ops::cell_to_dual(mesh, state.h);
  double out = 0.0;
  for (std::size_t z = 0; z < mesh.num_duals(); ++z) {
    const double w = c[z] + f[z];
    out += 0.5 * w * w / hz[z] * mesh.duals[z].area;
  }
  return out;
}

double mass(const Mesh &mesh, const CellField &h) {
  double m = 0.0;
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) m += mesh.cells[i].area * h[i];
  return m;
}

DiagnosticsBaseline make_baseline(const Mesh &mesh, const State &state, const PhysicalParams &params, const DualField &f) {
  return {energy(mesh, state, params), enstrophy(mesh, state, f), mass(mesh, state.h)};
}

namespace {
double rel(double x, double x0) { return x0 == 0.0 ? 0.0 : (x - x0) / std::abs(x0); }
} // namespace

DiagnosticsRecord make_record(const Mesh &mesh, const State &state, const PhysicalParams &params, const DualField &f,
                              const DiagnosticsBaseline &base, long step, int fp_iters) {
  DiagnosticsRecord r;
  r.step = step;
  r.time = state.t;
  r.energy = energy(mesh, state, params);
  r.enstrophy = enstrophy(mesh, state, f);
  r.mass = mass(mesh, state.h);
  r.energy_rel_err = rel(r.energy, base.energy);
  r.enstrophy_rel_err = rel(r.enstrophy, base.enstrophy);
  r.mass_rel_err = rel(r.mass, base.mass);
  r.fp_iters = fp_iters;
  return r;
}

std::vector<double> relative_error_series(const std::vector<double> &values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = rel(values[k], values[0]);
  return out;
}

ErrorNorms edge_error_norms(const Mesh &mesh, const EdgeField &numeric, const EdgeField &reference) {
  double num = 0.0, den = 0.0, emax = 0.0, rmax = 0.0;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const double w = 0.5 * mesh.edges[e].length * mesh.edges[e].dual_length;
    const double d = numeric[e] - reference[e];
    num += w * d * d;
    den += w * reference[e] * reference[e];
    emax = std::max(emax, std::abs(d));
    rmax = std::max(rmax, std::abs(reference[e]));
  }
  ErrorNorms n;
  n.l2 = den > 0.0 ? std::sqrt(num) / std::sqrt(den) : std::sqrt(num);
  n.linf = rmax > 0.0 ? emax / rmax : emax;
  return n;
}

namespace {

/// Nearest-circumcenter lookup on the periodic plane using a bucket grid.
class NearestCell {
public:
  explicit NearestCell(const Mesh &mesh) : mesh_(mesh) {
    nb_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.num_cells()) / 2.0)));
    buckets_.resize(static_cast<std::size_t>(nb_) * nb_);
    for (std::size_t i = 0; i < mesh.num_cells(); ++i) buckets_[bucket(mesh.cells[i].center)].push_back(static_cast<int>(i));
  }

  int operator()(const Vec3 &p) const {
    const int bx = coord(p.x(), mesh_.lx), by = coord(p.y(), mesh_.ly);
    int best = -1;
    double best_d = 0.0;
    for (int r = 1; best < 0 || r <= 2; ++r) {
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int cx = ((bx + dx) % nb_ + nb_) % nb_, cy = ((by + dy) % nb_ + nb_) % nb_;
          for (int i : buckets_[static_cast<std::size_t>(cy) * nb_ + cx]) {
            const double d = periodic_dist2(p, mesh_.cells[i].center);
            if (best < 0 || d < best_d || (d == best_d && i < best)) {
              best = i;
              best_d = d;
            }
          }
        }
      if (r > nb_) break;
    }
    return best;
  }

private:
  int coord(double x, double l) const {
    int b = static_cast<int>(std::floor(x / l * nb_));
    return ((b % nb_) + nb_) % nb_;
  }
  std::size_t bucket(const Vec3 &x) const { return static_cast<std::size_t>(coord(x.y(), mesh_.ly)) * nb_ + coord(x.x(), mesh_.lx); }
  double periodic_dist2(const Vec3 &a, const Vec3 &b) const {
    double dx = std::abs(a.x() - b.x()), dy = std::abs(a.y() - b.y());
    dx = std::min(dx, mesh_.lx - dx);
    dy = std::min(dy, mesh_.ly - dy);
    return dx * dx + dy * dy;
  }

  const Mesh &mesh_;
  int nb_ = 1;
  std::vector<std::vector<int>> buckets_;
};

struct FftwPlanDeleter {
  void operator()(fftw_plan_s *p) const { fftw_destroy_plan(p); }
};

/// |F_k|^2 for a real n x n field, returned on the half spectrum (n x (n/2+1)).
std::vector<double> power_half(std::vector<double> field, int n) {
  const int nc = n / 2 + 1;
  auto *out = static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * n * nc));
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(fftw_plan_dft_r2c_2d(n, n, field.data(), out, FFTW_ESTIMATE));
  fftw_execute(plan.get());
  std::vector<double> p(static_cast<std::size_t>(n) * nc);
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
  fftw_free(out);
  return p;
}

} // namespace

Spectrum spectra(const Mesh &mesh, const State &state, const DualField &f, int grid_n) {
  if (mesh.kind != GeometryKind::PlanePeriodic) throw ConfigError("spectra are only available on the periodic plane");
  if (grid_n < 2) throw ConfigError("spectra grid size must be at least 2");
  const int n = grid_n;
  const std::vector<Vec3> u = ops::reconstruct_cell(mesh, state.V);
  const DualField q = potential_vorticity(mesh, state.V, state.h, f);
  CellField qc(mesh.num_cells());
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    const Cell &c = mesh.cells[i];
    double s = 0.0, w = 0.0;
    for (int k = 0; k < 3; ++k) {
      s += c.kite[k] * q[c.vertices[k]];
      w += c.kite[k];
    }
    qc[i] = s / w;
  }

  const NearestCell nearest(mesh);
  const std::size_t m = static_cast<std::size_t>(n) * n;
  std::vector<double> fu(m), fv(m), fq(m);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec3 p((i + 0.5) * mesh.lx / n, (j + 0.5) * mesh.ly / n, 0.0);
      const int c = nearest(p);
      const double sh = std::sqrt(state.h[c]);
      const std::size_t k = static_cast<std::size_t>(j) * n + i;
      fu[k] = sh * u[c].x();
      fv[k] = sh * u[c].y();
      fq[k] = sh * qc[c];
    }

  const std::vector<double> pu = power_half(fu, n), pv = power_half(fv, n), pq = power_half(fq, n);
  const double dk = 2.0 * M_PI / std::max(mesh.lx, mesh.ly);
  const double norm = 1.0 / (static_cast<double>(m) * static_cast<double>(m));
  const int nc = n / 2 + 1;
  std::vector<double> ke, en;
  for (int j = 0; j < n; ++j) {
    const int jj = j <= n / 2 ? j : j - n;
    const double ky = 2.0 * M_PI * jj / mesh.ly;
    for (int i = 0; i < nc; ++i) {
      const double kx = 2.0 * M_PI * i / mesh.lx;
      // r2c stores only i <= n/2; interior columns stand for their mirror too
      const double mult = (i == 0 || (n % 2 == 0 && i == n / 2)) ? 1.0 : 2.0;
      const std::size_t bin = static_cast<std::size_t>(std::lround(std::hypot(kx, ky) / dk));
      if (bin >= ke.size()) {
        ke.resize(bin + 1, 0.0);
        en.resize(bin + 1, 0.0);
      }
      const std::size_t k = static_cast<std::size_t>(j) * nc + i;
      ke[bin] += mult * 0.5 * (pu[k] + pv[k]) * norm;
      en[bin] += mult * 0.5 * pq[k] * norm;
    }
  }
  Spectrum s;
  s.ke_density = std::move(ke);
  s.enstrophy_density = std::move(en);
  s.k.resize(s.ke_density.size());
  for (std::size_t b = 0; b < s.k.size(); ++b) s.k[b] = dk * static_cast<double>(b);
  return s;
}

DiagnosticsWriter::DiagnosticsWriter(const std::string &path, bool append) {
  const bool fresh = !append || !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  file_ = std::fopen(path.c_str(), append ? "a" : "w");
  if (!file_) throw ConfigError("cannot open " + path + " for writing");
  if (fresh) std::fputs("step,time_s,energy,enstrophy,mass,energy_rel_err,enstrophy_rel_err,mass_rel_err,fp_iters\n", file_);
}

DiagnosticsWriter::~DiagnosticsWriter() {
  if (file_) std::fclose(file_);
}

void DiagnosticsWriter::write(const DiagnosticsRecord &r) {
  std::fprintf(file_, "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.step, r.time, r.energy, r.enstrophy, r.mass,
               r.energy_rel_err, r.enstrophy_rel_err, r.mass_rel_err, r.fp_iters);
  std::fflush(file_);
}

void write_spectrum_csv(const std::string &path, const Spectrum &s) {
  std::FILE *fp = std::fopen(path.c_str(), "w");
  if (!fp) throw ConfigError("cannot open " + path + " for writing");
  std::fputs("k,ke_density,enstrophy_density\n", fp);
  for (std::size_t b = 0; b < s.k.size(); ++b) std::fprintf(fp, "%.17g,%.17g,%.17g\n", s.k[b], s.ke_density[b], s.enstrophy_density[b]);
  std::fclose(fp);
}

} // namespace swe
