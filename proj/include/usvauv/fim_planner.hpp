#pragma once

// Fisher information of the USBL phase measurements with respect to the USV
// horizontal position, its determinant, the symmetric-constellation closed
// form, and a differential-evolution waypoint planner that maximizes det(J).

#include <cstdint>
#include <span>
#include <vector>

#include "usvauv/usbl.hpp"

namespace usvauv::fim {

using usbl::AuvTruth;
using usbl::UsblConfig;
using usbl::UsvState;

struct FimMatrix {
  double j11 = 0.0;
  double j12 = 0.0;
  double j22 = 0.0;
  double det = 0.0;

  double j21() const { return j12; }
  double trace() const { return j11 + j22; }
  // Eigenvalues in ascending order.
  std::pair<double, double> eigenvalues() const;
};

// d(dphi_x, dphi_y) / d(usv x, usv y), row-major.
struct Jacobian {
  double h11 = 0.0, h12 = 0.0, h21 = 0.0, h22 = 0.0;
};

Jacobian phase_jacobian(const UsvState& usv, const AuvTruth& auv, const UsblConfig& cfg);

// J = sum_k H_k^T H_k / sigma_k^2, one config per AUV (own carrier frequency).
// Throws DegenerateGeometry naming the AUV index for S_k = 0 and ConfigError
// for sigma_phase = 0.
FimMatrix fim(const UsvState& usv, std::span<const AuvTruth> auvs,
              std::span<const UsblConfig> cfgs);
// Same configuration for every AUV.
FimMatrix fim(const UsvState& usv, std::span<const AuvTruth> auvs, const UsblConfig& cfg);

double det_fim(const UsvState& usv, std::span<const AuvTruth> auvs,
               std::span<const UsblConfig> cfgs);
double det_fim(const UsvState& usv, std::span<const AuvTruth> auvs, const UsblConfig& cfg);

// Per-AUV geometry seen from the USV: slant S_k, elevation gamma_k
// (sin gamma_k = z_eff / S_k), azimuth phi_k, horizontal radius p_k and the
// weight A_k = (p^4 - 2 S^2 p^2) / (2 S^6).
struct GeometryTerms {
  double slant = 0.0;
  double gamma = 0.0;
  double phi = 0.0;
  double p = 0.0;
  double a = 0.0;
};

std::vector<GeometryTerms> geometry_terms(const UsvState& usv, std::span<const AuvTruth> auvs);

// sum_{i<j} sin^2(phi_i - phi_j)
double angular_diversity(std::span<const GeometryTerms> terms);

// Equal slant, equal depth constellation described only by its azimuths.
struct SymmetricCase {
  double s0 = 0.0;
  double gamma0 = 0.0;
  int m = 0;
  double chi = 0.0;

  void validate() const;
};

// (4 pi^2 f^2 d^2 / (sigma^2 c^2))^2 [3 m sin^2 g0 / S0^4 + (sin^4 g0 + 1)^2 chi / S0^4]
double det_symmetric(const SymmetricCase& c, const UsblConfig& cfg);

// Golden-section argmax of det_symmetric over the horizontal standoff
// r in [r_min, r_max] at fixed depth; endpoints are compared explicitly.
double optimal_radius(double depth_z, int m, double chi, const UsblConfig& cfg, double r_min,
                      double r_max);

struct Bounds {
  double x_min = 0.0;
  double x_max = 200.0;
  double y_min = 0.0;
  double y_max = 200.0;
};

struct PlannerConfig {
  Bounds bounds;
  int pop_size = 30;
  int nit = 24;
  // Differential weight dithered uniformly in [f_min, f_max] per generation.
  double f_min = 0.5;
  double f_max = 1.0;
  double cr = 0.9;
  std::uint64_t seed = 0;
  double standoff_r_min = 0.0;

  void validate() const;
};

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double det = 0.0;
  long evaluations = 0;
  // Single-AUV planning: the optimum sits directly above the AUV.
  bool degenerate = false;
  // Best det after the initial population and after each generation.
  std::vector<double> history;
};

// Objective maximized by the planner; candidates closer than standoff_r_min
// to any AUV score below every feasible point.
double planner_objective(double x, double y, double usv_eta, std::span<const AuvTruth> auvs,
                         std::span<const UsblConfig> cfgs, double standoff_r_min);

// DE rand/1/bin with Latin-hypercube initialization and generation-synchronous
// selection. Generation g of a run with nit = N is identical to generation g of
// any longer run with the same seed.
Waypoint plan_waypoint(std::span<const AuvTruth> auvs, std::span<const UsblConfig> cfgs,
                       const PlannerConfig& plan, double usv_eta = 0.0);

// Exhaustive grid search over the bounds (inclusive) at the given step.
Waypoint grid_search(std::span<const AuvTruth> auvs, std::span<const UsblConfig> cfgs,
                     const Bounds& bounds, double step, double usv_eta = 0.0,
                     double standoff_r_min = 0.0);

}  // namespace usvauv::fim
