#include <algorithm>
#include <cmath>

#include "usvauv/errors.hpp"
#include "usvauv/sea_env.hpp"

namespace usvauv::sea {
namespace {

WaveGridConfig fit_grid(WaveGridConfig g, double x_max, double y_max) {
  g.nx = static_cast<std::size_t>(std::llround(x_max / g.dx)) + 1;
  g.ny = static_cast<std::size_t>(std::llround(y_max / g.dy)) + 1;
  if (g.nx < 3 || g.ny < 3) throw ConfigError("mission area too small for the wave grid spacing");
  g.dx = x_max / static_cast<double>(g.nx - 1);
  g.dy = y_max / static_cast<double>(g.ny - 1);
  return g;
}

}  // namespace

SeaState::SeaState(const SeaConfig& cfg, double x_max, double y_max, std::mt19937_64& rng)
    : cfg_(cfg), grid_(fit_grid(cfg.grid, x_max, y_max)) {
  if (cfg_.enabled) vortices_ = place_vortices(x_max, y_max, cfg_.vortices, rng);
}

void SeaState::advance_to(double target_time) {
  if (cfg_.enabled) sea::advance_to(grid_, target_time, cfg_.forcing);
}

SeaSample SeaState::sample(double x, double y) const {
  if (!cfg_.enabled) return {};
  return sample_sea(grid_, vortices_, std::clamp(x, 0.0, grid_.extent_x()),
                    std::clamp(y, 0.0, grid_.extent_y()));
}

}  // namespace usvauv::sea
