#include "usvauv/usbl.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "usvauv/errors.hpp"

namespace usvauv::usbl {

double UsblConfig::phase_gain() const {
  return 2.0 * std::numbers::pi * freq * spacing_d / sound_speed_c;
}

void UsblConfig::validate() const {
  if (!(freq > 0.0)) throw ConfigError("usbl frequency must be > 0");
  if (!(spacing_d > 0.0)) throw ConfigError("usbl element spacing must be > 0");
  if (!(sound_speed_c > 0.0)) throw ConfigError("sound speed must be > 0");
  if (!(sigma_phase >= 0.0)) throw ConfigError("sigma_phase must be >= 0");
  if (!(sigma_range >= 0.0)) throw ConfigError("sigma_range must be >= 0");
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be >= 0");
}

double default_frequency(int auv_index) { return 12000.0 + 2000.0 * auv_index; }

std::vector<UsblConfig> per_auv_configs(const UsblConfig& base, int n_auv) {
  std::vector<UsblConfig> out(static_cast<std::size_t>(n_auv), base);
  for (int k = 0; k < n_auv; ++k) out[static_cast<std::size_t>(k)].freq = base.freq + default_frequency(k) - default_frequency(0);
  return out;
}

UsblMeasurement true_phases(const UsvState& usv, const AuvTruth& auv, const UsblConfig& cfg) {
  const double dx = auv.x - usv.x;
  const double dy = auv.y - usv.y;
  const double z = effective_depth(usv, auv);
  const double s = std::sqrt(dx * dx + dy * dy + z * z);
  if (!(s > 0.0)) throw DegenerateGeometry("USV and AUV positions coincide (slant range 0)");
  const double k = cfg.phase_gain();
  return {k * dx / s, k * dy / s, s};
}

UsblMeasurement measure(const UsvState& usv, const AuvTruth& auv, const UsblConfig& cfg,
                        std::mt19937_64& rng, double wave_speed) {
  UsblMeasurement m = true_phases(usv, auv, cfg);
  const double sp = cfg.sigma_phase * (1.0 + cfg.kappa * std::abs(wave_speed));
  std::normal_distribution<double> unit(0.0, 1.0);
  // Always draw three normals so the RNG stream does not depend on sigma.
  const double nx = unit(rng), ny = unit(rng), nr = unit(rng);
  m.dphi_x += sp * nx;
  m.dphi_y += sp * ny;
  m.slant = std::max(m.slant + cfg.sigma_range * nr, 1e-6);
  return m;
}

PositionEstimate localize(const UsblMeasurement& meas, const UsvState& usv,
                          const UsblConfig& cfg) {
  if (!(meas.slant > 0.0)) throw DomainError("slant range must be > 0 to localize");
  const double k = cfg.phase_gain();
  PositionEstimate est;
  est.x_hat = usv.x + meas.dphi_x * meas.slant / k;
  est.y_hat = usv.y + meas.dphi_y * meas.slant / k;
  est.inconsistent = std::abs(meas.dphi_x) > k || std::abs(meas.dphi_y) > k;
  return est;
}

double positioning_error(const PositionEstimate& est, const AuvTruth& truth) {
  return std::hypot(est.x_hat - truth.x, est.y_hat - truth.y);
}

}  // namespace usvauv::usbl
