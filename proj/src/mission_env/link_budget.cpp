#include <algorithm>
#include <cmath>

#include "usvauv/mission_env.hpp"

namespace usvauv::mission {

double thorp_absorption_db_per_km(double f_khz) {
  const double f2 = f_khz * f_khz;
  return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003;
}

double link_snr_db(double dist, const LinkBudget& link) {
  const double spreading = 20.0 * std::log10(std::max(dist, 1.0));
  // Inside 1 m the budget saturates at its 1 m value.
  const double absorption = thorp_absorption_db_per_km(link.freq_khz) * std::max(dist, 1.0) / 1000.0;
  return link.source_level_db - spreading - absorption - link.noise_level_db;
}

double link_rate(double dist, const MissionConfig& cfg) {
  if (dist > cfg.comm_range) return 0.0;
  const double snr = std::pow(10.0, link_snr_db(dist, cfg.link) / 10.0);
  return cfg.link.bandwidth_hz * std::log2(1.0 + snr);
}

}  // namespace usvauv::mission
