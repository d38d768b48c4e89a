#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "usvauv/harness/rollout.hpp"
#include "usvauv/rl/trainer.hpp"

namespace usvauv::harness {

Policy random_policy(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const mission::MissionEnv& env, const std::vector<mission::StateVector>&) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<mission::ActionVector> a(static_cast<std::size_t>(env.n_auv()));
    for (auto& x : a) {
      x.v_norm = u(*rng);
      x.theta_norm = u(*rng);
    }
    return a;
  };
}

Policy scripted_patrol() {
  return [](const mission::MissionEnv& env, const std::vector<mission::StateVector>&) {
    const auto& m = env.config().mission;
    std::vector<mission::ActionVector> out(static_cast<std::size_t>(env.n_auv()));
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto& a = env.auvs()[k];
      if (a.target_id < 0) {
        out[k] = {-1.0, 0.0};
        continue;
      }
      const auto& n = env.nodes()[static_cast<std::size_t>(a.target_id)];
      const double dx = n.x - a.x, dy = n.y - a.y;
      const double speed = std::clamp(std::hypot(dx, dy) / m.dt, m.v_min, m.v_max);
      out[k].v_norm = 2.0 * (speed - m.v_min) / (m.v_max - m.v_min) - 1.0;
      out[k].theta_norm = std::atan2(dy, dx) / std::numbers::pi;
    }
    return out;
  };
}

Policy actor_policy(std::shared_ptr<const rl::Td3Agent> agent) {
  return [agent](const mission::MissionEnv&, const std::vector<mission::StateVector>& states) {
    std::vector<mission::ActionVector> out;
    for (const auto& s : states) {
      const auto a = agent->act(s);
      out.push_back({a[0], a[1]});
    }
    return out;
  };
}

mission::EpisodeMetrics run_episode(mission::MissionEnv& env, const Policy& policy,
                                    std::uint64_t seed) {
  auto states = env.reset(seed);
  while (!env.done()) {
    const auto actions = policy(env, states);
    states = env.step(actions).states;
  }
  return mission::collect_metrics(env.log());
}

std::uint64_t eval_episode_seed(std::uint64_t run_seed, int episode) {
  return rl::episode_seed(run_seed ^ 0x5EEDE7A1ULL, episode);
}

}  // namespace usvauv::harness
