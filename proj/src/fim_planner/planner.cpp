#include <cmath>
#include <limits>

#include "usvauv/differential_evolution.hpp"
#include "usvauv/errors.hpp"
#include "usvauv/fim_planner.hpp"

namespace usvauv::fim {

void PlannerConfig::validate() const {
  if (pop_size < 8) throw ConfigError("planner pop_size must be >= 8");
  if (nit < 1) throw ConfigError("planner nit must be >= 1");
  if (!(cr > 0.0 && cr <= 1.0)) throw ConfigError("planner cr must be in (0, 1]");
  if (!(f_min > 0.0 && f_max < 2.0 && f_min <= f_max))
    throw ConfigError("planner differential weight must lie in (0, 2)");
  if (!(bounds.x_min < bounds.x_max && bounds.y_min < bounds.y_max))
    throw ConfigError("planner bounds are empty");
  if (!(standoff_r_min >= 0.0)) throw ConfigError("standoff_r_min must be >= 0");
}

double planner_objective(double x, double y, double usv_eta, std::span<const AuvTruth> auvs,
                         std::span<const UsblConfig> cfgs, double standoff_r_min) {
  if (standoff_r_min > 0.0) {
    double violation = 0.0;
    for (const auto& a : auvs) violation += std::max(0.0, standoff_r_min - std::hypot(a.x - x, a.y - y));
    if (violation > 0.0) return -1.0 - violation;
  }
  try {
    return det_fim({x, y, usv_eta}, auvs, cfgs);
  } catch (const DegenerateGeometry&) {
    return -std::numeric_limits<double>::infinity();
  }
}

Waypoint plan_waypoint(std::span<const AuvTruth> auvs, std::span<const UsblConfig> cfgs,
                       const PlannerConfig& plan, double usv_eta) {
  if (auvs.empty()) throw DomainError("cannot plan a waypoint without AUVs");
  if (cfgs.size() != auvs.size()) throw ConfigError("one USBL config per AUV required");
  plan.validate();
  const double lo[2] = {plan.bounds.x_min, plan.bounds.y_min};
  const double hi[2] = {plan.bounds.x_max, plan.bounds.y_max};
  de::Options opt;
  opt.pop_size = plan.pop_size;
  opt.generations = plan.nit;
  opt.f_min = plan.f_min;
  opt.f_max = plan.f_max;
  opt.cr = plan.cr;
  opt.seed = plan.seed;
  const auto objective = [&](std::span<const double> p) {
    return planner_objective(p[0], p[1], usv_eta, auvs, cfgs, plan.standoff_r_min);
  };
  de::Result r = de::maximize(lo, hi, objective, opt);
  Waypoint w;
  w.x = r.best[0];
  w.y = r.best[1];
  w.det = r.value;
  w.evaluations = r.evaluations;
  w.degenerate = auvs.size() == 1;
  w.history = std::move(r.history);
  return w;
}

Waypoint grid_search(std::span<const AuvTruth> auvs, std::span<const UsblConfig> cfgs,
                     const Bounds& bounds, double step, double usv_eta, double standoff_r_min) {
  if (!(step > 0.0)) throw ConfigError("grid step must be > 0");
  if (auvs.empty()) throw DomainError("cannot search without AUVs");
  const long nx = static_cast<long>(std::floor((bounds.x_max - bounds.x_min) / step + 1e-9));
  const long ny = static_cast<long>(std::floor((bounds.y_max - bounds.y_min) / step + 1e-9));
  Waypoint best;
  best.det = -std::numeric_limits<double>::infinity();
  for (long i = 0; i <= nx; ++i)
    for (long j = 0; j <= ny; ++j) {
      const double x = bounds.x_min + static_cast<double>(i) * step;
      const double y = bounds.y_min + static_cast<double>(j) * step;
      const double v = planner_objective(x, y, usv_eta, auvs, cfgs, standoff_r_min);
      ++best.evaluations;
      if (v > best.det) {
        best.det = v;
        best.x = x;
        best.y = y;
      }
    }
  best.degenerate = auvs.size() == 1;
  return best;
}

}  // namespace usvauv::fim
