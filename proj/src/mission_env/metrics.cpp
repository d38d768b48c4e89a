#include "usvauv/mission_env.hpp"

namespace usvauv::mission {

EpisodeMetrics collect_metrics(const EpisodeLog& log) {
  EpisodeMetrics m;
  const std::size_t n = log.steps.size();
  if (n == 0) return m;
  m.traj_lens.assign(log.steps.front().auvs.size(), 0.0);

  double bits = 0.0, power = 0.0, reward = 0.0, err = 0.0;
  long err_count = 0;
  for (const auto& s : log.steps) {
    for (std::size_t k = 0; k < s.auvs.size(); ++k) {
      const auto& a = s.auvs[k];
      bits += a.transfer_bits;
      power += a.power;
      reward += a.terms.total();
      m.ssn += a.transmitted;
      m.traj_lens[k] += a.moved;
      err += a.pos_error;
      ++err_count;
    }
    m.violations += s.violations;
  }
  const double steps = static_cast<double>(n);
  m.sdr = bits / (steps * log.dt) / 1.0e6;
  m.ec = power / steps;
  m.arpt = reward / steps;
  m.pos_error_mean = err_count ? err / static_cast<double>(err_count) : 0.0;
  return m;
}

}  // namespace usvauv::mission
