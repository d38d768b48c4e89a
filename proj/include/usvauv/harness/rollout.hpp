#pragma once

// Policies and episode rollouts used by eval, sweep and the acceptance runs.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "usvauv/mission_env.hpp"
#include "usvauv/rl/td3.hpp"

namespace usvauv::harness {

using Policy = std::function<std::vector<mission::ActionVector>(
    const mission::MissionEnv&, const std::vector<mission::StateVector>&)>;

// Uniform actions in [-1, 1]^2 from its own stream.
Policy random_policy(std::uint64_t seed);
// Steers each AUV straight at its assigned SN, as fast as allowed without
// overshooting it within one step.
Policy scripted_patrol();
// Noise-free shared actor.
Policy actor_policy(std::shared_ptr<const rl::Td3Agent> agent);

// Resets env with the given seed and runs it to the end.
mission::EpisodeMetrics run_episode(mission::MissionEnv& env, const Policy& policy,
                                    std::uint64_t seed);

// Evaluation episode seeds are disjoint from training ones.
std::uint64_t eval_episode_seed(std::uint64_t run_seed, int episode);

}  // namespace usvauv::harness
