#include <algorithm>
#include <cmath>
#include <string>

#include "usvauv/errors.hpp"
#include "usvauv/kernels/kernels.hpp"
#include "usvauv/sea_env.hpp"

namespace usvauv::sea {

double WaveGrid::cfl_limit(const WaveGridConfig& cfg) {
  return std::min(cfg.dx, cfg.dy) / std::sqrt(2.0 * cfg.g * cfg.depth_h);
}

WaveGrid::WaveGrid(const WaveGridConfig& cfg) : cfg_(cfg) {
  if (cfg.nx < 3 || cfg.ny < 3) throw ConfigError("wave grid needs at least 3 x 3 points");
  if (!(cfg.dx > 0.0) || !(cfg.dy > 0.0) || !(cfg.dt_sub > 0.0))
    throw ConfigError("wave grid steps must be positive");
  if (!(cfg.depth_h > 0.0) || !(cfg.g > 0.0))
    throw ConfigError("wave grid depth and gravity must be positive");
  const double limit = cfl_limit(cfg);
  if (cfg.dt_sub > limit)
    throw ConfigError("wave substep " + std::to_string(cfg.dt_sub) +
                      " s violates CFL limit " + std::to_string(limit) + " s");
  const std::size_t n = cfg.nx * cfg.ny;
  eta_.assign(n, 0.0);
  u_.assign(n, 0.0);
  v_.assign(n, 0.0);
}

void step_wave(WaveGrid& grid, const Forcing& forcing) {
  const auto& k = kernels::active();
  const auto& cfg = grid.cfg_;
  const std::size_t nx = cfg.nx, ny = cfg.ny;
  double* eta = grid.eta_.data();
  double* u = grid.u_.data();
  double* v = grid.v_.data();

  const double cu = cfg.g * cfg.dt_sub / cfg.dx;
  const double cv = cfg.g * cfg.dt_sub / cfg.dy;
  const double hx = cfg.depth_h * cfg.dt_sub / cfg.dx;
  const double hy = cfg.depth_h * cfg.dt_sub / cfg.dy;

  // u-momentum: u_ij -= g dt/dx (eta_{i+1,j} - eta_ij); east wall face stays 0.
  for (std::size_t j = 0; j < ny; ++j) {
    double* eta_row = eta + j * nx;
    k.sub_scaled_diff(cu, eta_row + 1, eta_row, u + j * nx, nx - 1);
  }
  // v-momentum: v_ij -= g dt/dy (eta_{i,j+1} - eta_ij); north wall row stays 0.
  for (std::size_t j = 0; j + 1 < ny; ++j)
    k.sub_scaled_diff(cv, eta + (j + 1) * nx, eta + j * nx, v + j * nx, nx);

  // Continuity with zero flux through the west and south walls.
  for (std::size_t j = 0; j < ny; ++j) {
    double* eta_row = eta + j * nx;
    const double* u_row = u + j * nx;
    eta_row[0] -= hx * u_row[0];
    k.sub_scaled_diff(hx, u_row + 1, u_row, eta_row + 1, nx - 1);
  }
  k.axpy(-hy, v, eta, nx);
  for (std::size_t j = 1; j < ny; ++j)
    k.sub_scaled_diff(hy, v + j * nx, v + (j - 1) * nx, eta + j * nx, nx);

  ++grid.steps_;
  if (cfg.forced_west_edge) {
    const double edge = forcing.amplitude * std::sin(forcing.omega * grid.t());
    for (std::size_t j = 0; j < ny; ++j) eta[j * nx] = edge;
  }

  double probe = 0.0;
  for (std::size_t i = 0; i < nx * ny; ++i) probe += eta[i] + u[i] + v[i];
  if (!std::isfinite(probe)) throw NumericalBlowup("wave solver produced non-finite field", grid.steps_);
}

long advance_to(WaveGrid& grid, double target_time, const Forcing& forcing) {
  const double remaining = target_time - grid.t();
  if (remaining < -1e-9 * std::max(1.0, std::abs(target_time)))
    throw DomainError("advance_to target time lies in the past");
  if (remaining <= 0.0) return 0;
  const long n = static_cast<long>(std::ceil(remaining / grid.dt_sub() - 1e-9));
  for (long s = 0; s < n; ++s) step_wave(grid, forcing);
  return n;
}

double total_elevation(const WaveGrid& grid) {
  double s = 0.0;
  for (double e : grid.eta()) s += e;
  return s;
}

namespace {

// Bilinear interpolation of a node field whose (0, 0) sample sits at (ox, oy).
double bilinear(std::span<const double> f, std::size_t nx, std::size_t ny, double dx, double dy,
                double ox, double oy, double x, double y) {
  const double fx = std::clamp((x - ox) / dx, 0.0, static_cast<double>(nx - 1));
  const double fy = std::clamp((y - oy) / dy, 0.0, static_cast<double>(ny - 1));
  const std::size_t i0 = std::min(static_cast<std::size_t>(fx), nx - 2);
  const std::size_t j0 = std::min(static_cast<std::size_t>(fy), ny - 2);
  const double tx = fx - static_cast<double>(i0);
  const double ty = fy - static_cast<double>(j0);
  const double f00 = f[j0 * nx + i0], f10 = f[j0 * nx + i0 + 1];
  const double f01 = f[(j0 + 1) * nx + i0], f11 = f[(j0 + 1) * nx + i0 + 1];
  return (1.0 - ty) * ((1.0 - tx) * f00 + tx * f10) + ty * ((1.0 - tx) * f01 + tx * f11);
}

}  // namespace

SeaSample sample_sea(const WaveGrid& grid, std::span<const VortexSpec> vortices, double x,
                     double y) {
  if (!(x >= 0.0 && x <= grid.extent_x() && y >= 0.0 && y <= grid.extent_y()))
    throw DomainError("sea sample (" + std::to_string(x) + ", " + std::to_string(y) +
                      ") outside grid extent");
  const std::size_t nx = grid.nx(), ny = grid.ny();
  SeaSample s;
  s.eta = bilinear(grid.eta(), nx, ny, grid.dx(), grid.dy(), 0.0, 0.0, x, y);
  s.wave_u = bilinear(grid.u(), nx, ny, grid.dx(), grid.dy(), 0.5 * grid.dx(), 0.0, x, y);
  s.wave_v = bilinear(grid.v(), nx, ny, grid.dx(), grid.dy(), 0.0, 0.5 * grid.dy(), x, y);
  const VortexField vf = vortex_field(vortices, x, y);
  s.turb_u = vf.vx;
  s.turb_v = vf.vy;
  s.vorticity = vf.vorticity;
  return s;
}

}  // namespace usvauv::sea
