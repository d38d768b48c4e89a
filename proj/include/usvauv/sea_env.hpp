#pragma once

// Extreme-sea disturbance model: a linear shallow-water tidal wave solved on a
// staggered grid with explicit finite differences, plus analytic Lamb-Oseen
// vortices. Both can be sampled at arbitrary points inside the grid extent.

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace usvauv::sea {

struct WaveGridConfig {
  std::size_t nx = 51;
  std::size_t ny = 51;
  double dx = 4.0;
  double dy = 4.0;
  double dt_sub = 0.05;
  double depth_h = 120.0;
  double g = 9.81;
  // West edge (x = 0) driven by eta0 * sin(omega * t); otherwise all four
  // edges are reflective walls.
  bool forced_west_edge = true;

  bool operator==(const WaveGridConfig&) const = default;
};

struct Forcing {
  double amplitude = 0.0;  // eta0 (m)
  double omega = 0.0;      // rad/s
};

// Elevation eta lives on nodes (i*dx, j*dy). u lives on x-faces
// ((i+1/2)*dx, j*dy) and v on y-faces (i*dx, (j+1/2)*dy); the last u column and
// last v row are the closed walls and stay zero. Storage is row-major, row = j.
class WaveGrid {
 public:
  explicit WaveGrid(const WaveGridConfig& cfg);

  const WaveGridConfig& config() const { return cfg_; }
  std::size_t nx() const { return cfg_.nx; }
  std::size_t ny() const { return cfg_.ny; }
  double dx() const { return cfg_.dx; }
  double dy() const { return cfg_.dy; }
  double dt_sub() const { return cfg_.dt_sub; }
  double depth() const { return cfg_.depth_h; }
  double g() const { return cfg_.g; }
  double extent_x() const { return static_cast<double>(cfg_.nx - 1) * cfg_.dx; }
  double extent_y() const { return static_cast<double>(cfg_.ny - 1) * cfg_.dy; }

  // Simulated time; always steps() * dt_sub.
  double t() const { return static_cast<double>(steps_) * cfg_.dt_sub; }
  long steps() const { return steps_; }

  std::span<double> eta() { return eta_; }
  std::span<double> u() { return u_; }
  std::span<double> v() { return v_; }
  std::span<const double> eta() const { return eta_; }
  std::span<const double> u() const { return u_; }
  std::span<const double> v() const { return v_; }

  std::size_t index(std::size_t i, std::size_t j) const { return j * cfg_.nx + i; }
  double eta_at(std::size_t i, std::size_t j) const { return eta_[index(i, j)]; }

  // Largest stable substep for this grid: min(dx, dy) / sqrt(2 g h).
  static double cfl_limit(const WaveGridConfig& cfg);

  bool operator==(const WaveGrid& o) const = default;

 private:
  friend void step_wave(WaveGrid& grid, const Forcing& forcing);

  WaveGridConfig cfg_;
  long steps_ = 0;
  std::vector<double> eta_;
  std::vector<double> u_;
  std::vector<double> v_;
};

// One explicit substep. Momentum is updated from eta^n, continuity then uses
// the freshly updated fluxes (forward-backward time stepping). Throws
// NumericalBlowup naming the step index if any field turns non-finite.
void step_wave(WaveGrid& grid, const Forcing& forcing);

// Substeps until t >= target_time; returns the number of substeps taken,
// ceil((target_time - t) / dt_sub) up to a 1e-9 rounding allowance.
long advance_to(WaveGrid& grid, double target_time, const Forcing& forcing);

double total_elevation(const WaveGrid& grid);

struct VortexSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  double gamma = 0.0;  // circulation (m^2/s)
  double delta = 1.0;  // core radius (m)
};

struct VortexField {
  double vx = 0.0;
  double vy = 0.0;
  double vorticity = 0.0;
};

// Superposed Lamb-Oseen velocity and vorticity at (x, y). At a vortex center
// the velocity contribution is its r -> 0 limit, zero.
VortexField vortex_field(std::span<const VortexSpec> vortices, double x, double y);

void validate(const VortexSpec& v);

struct SeaSample {
  double eta = 0.0;
  double wave_u = 0.0;
  double wave_v = 0.0;
  double turb_u = 0.0;
  double turb_v = 0.0;
  double vorticity = 0.0;
};

// Bilinear eta/u/v (respecting the staggering) plus analytic vortex terms.
// Throws DomainError outside [0, extent_x] x [0, extent_y].
SeaSample sample_sea(const WaveGrid& grid, std::span<const VortexSpec> vortices, double x,
                     double y);

struct VortexPlacement {
  double quadrant = 100.0;  // one vortex per quadrant x quadrant cell
  double gamma_min = 30.0;
  double gamma_max = 60.0;
  double delta_min = 10.0;
  double delta_max = 20.0;
};

std::vector<VortexSpec> place_vortices(double x_max, double y_max,
                                       const VortexPlacement& placement, std::mt19937_64& rng);

// Wave grid plus vortices plus forcing: the disturbance source a mission
// episode owns. A calm sea has no vortices and zero forcing and is never
// stepped.
struct SeaConfig {
  WaveGridConfig grid;
  Forcing forcing{5.0, 2.0 * 3.14159265358979323846 / 43200.0};
  VortexPlacement vortices;
  bool enabled = true;
};

class SeaState {
 public:
  SeaState(const SeaConfig& cfg, double x_max, double y_max, std::mt19937_64& rng);

  bool enabled() const { return cfg_.enabled; }
  const WaveGrid& grid() const { return grid_; }
  std::span<const VortexSpec> vortices() const { return vortices_; }
  double t() const { return grid_.t(); }

  void advance_to(double target_time);
  // Calm-sea samples are all zero; coordinates are clamped into the grid.
  SeaSample sample(double x, double y) const;

 private:
  SeaConfig cfg_;
  WaveGrid grid_;
  std::vector<VortexSpec> vortices_;
};

}  // namespace usvauv::sea
