#include <algorithm>
#include <cmath>
#include <numbers>

#include "usvauv/errors.hpp"
#include "usvauv/sea_env.hpp"

namespace usvauv::sea {

void validate(const VortexSpec& v) {
  if (!(v.delta > 0.0) || !std::isfinite(v.delta)) throw ConfigError("vortex core radius must be > 0");
  if (!std::isfinite(v.gamma) || !std::isfinite(v.x0) || !std::isfinite(v.y0))
    throw ConfigError("vortex parameters must be finite");
}

VortexField vortex_field(std::span<const VortexSpec> vortices, double x, double y) {
  VortexField out;
  for (const auto& vx : vortices) {
    const double rx = x - vx.x0;
    const double ry = y - vx.y0;
    const double r2 = rx * rx + ry * ry;
    const double d2 = vx.delta * vx.delta;
    out.vorticity += vx.gamma / (std::numbers::pi * d2) * std::exp(-r2 / d2);
    if (r2 == 0.0) continue;
    // (1 - exp(-r^2/delta^2)) / r^2, accurate for small r
    const double shape = -std::expm1(-r2 / d2) / r2;
    const double k = vx.gamma / (2.0 * std::numbers::pi) * shape;
    out.vx += -k * ry;
    out.vy += k * rx;
  }
  return out;
}

std::vector<VortexSpec> place_vortices(double x_max, double y_max,
                                       const VortexPlacement& p, std::mt19937_64& rng) {
  std::vector<VortexSpec> out;
  const int qx = std::max(1, static_cast<int>(std::ceil(x_max / p.quadrant - 1e-9)));
  const int qy = std::max(1, static_cast<int>(std::ceil(y_max / p.quadrant - 1e-9)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int j = 0; j < qy; ++j)
    for (int i = 0; i < qx; ++i) {
      const double x_lo = i * p.quadrant, x_hi = std::min(x_max, (i + 1) * p.quadrant);
      const double y_lo = j * p.quadrant, y_hi = std::min(y_max, (j + 1) * p.quadrant);
      VortexSpec v;
      v.x0 = x_lo + unit(rng) * (x_hi - x_lo);
      v.y0 = y_lo + unit(rng) * (y_hi - y_lo);
      v.gamma = p.gamma_min + unit(rng) * (p.gamma_max - p.gamma_min);
      v.delta = p.delta_min + unit(rng) * (p.delta_max - p.delta_min);
      validate(v);
      out.push_back(v);
    }
  return out;
}

}  // namespace usvauv::sea
