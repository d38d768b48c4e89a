#include <cstdio>

#include "usvauv/errors.hpp"
#include "usvauv/rl/trainer.hpp"

namespace usvauv::rl {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string curves_csv_header() { return "episode,arpt,sdr_mbps,ec_w,ssn"; }

void write_curve_row(std::ostream& os, const CurveRow& row) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%d\n", row.episode, row.arpt, row.sdr, row.ec,
                row.ssn);
  os << buf;
}

std::uint64_t episode_seed(std::uint64_t run_seed, int episode) {
  return mix(mix(run_seed) + static_cast<std::uint64_t>(episode));
}

std::vector<double> convergence_metrics(const mission::EpisodeMetrics& m) {
  return {m.arpt, m.sdr, m.ec};
}

TrainResult train(mission::MissionEnv& env, Td3Agent& agent, const TrainOptions& opt) {
  const Td3Hyper& h = agent.hyper();
  const int m = env.n_auv();
  const int ad = agent.action_dim();
  if (env.state_dim() != agent.state_dim() || ad != 2)
    throw TrainingFault("agent widths do not match the environment");

  ReplayBuffer buffer(h.buffer_capacity, agent.state_dim(), ad);
  std::mt19937_64 explore(mix(opt.seed ^ 0xE7A1ULL));
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ConvergenceDetector detector(3, opt.rule);
  TrainResult res;
  std::vector<mission::ActionVector> actions(static_cast<std::size_t>(m));
  std::vector<std::vector<double>> raw(static_cast<std::size_t>(m));

  for (int ep = 0; ep < h.episodes; ++ep) {
    auto states = env.reset(episode_seed(opt.seed, ep));
    try {
      while (!env.done()) {
        for (int k = 0; k < m; ++k) {
          auto& a = raw[static_cast<std::size_t>(k)];
          if (res.env_steps < h.warmup_steps) {
            a = {uni(explore), uni(explore)};
          } else {
            a = agent.select_action(states[static_cast<std::size_t>(k)], explore, h.explore_sigma);
          }
          actions[static_cast<std::size_t>(k)] = {a[0], a[1]};
        }
        auto step = env.step(actions);
        ++res.env_steps;
        for (int k = 0; k < m; ++k) {
          const auto uk = static_cast<std::size_t>(k);
          buffer.add(states[uk], raw[uk], h.reward_scale * step.rewards[uk], step.states[uk], step.done);
        }
        res.max_buffer_size = std::max(res.max_buffer_size, buffer.size());
        // Learning starts with the first policy-driven step.
        if (res.env_steps > h.warmup_steps && buffer.size() >= static_cast<std::size_t>(h.batch))
          agent.train_step(buffer);
        states = std::move(step.states);
      }
    } catch (const RuntimeFault& e) {
      throw TrainingFault("episode " + std::to_string(ep) + ", step " +
                          std::to_string(env.step_index()) + ": " + e.what());
    }

    const auto metrics = mission::collect_metrics(env.log());
    res.metrics.push_back(metrics);
    res.curves.push_back({ep, metrics.arpt, metrics.sdr, metrics.ec, metrics.ssn});
    detector.push(convergence_metrics(metrics));
    if (opt.on_episode) opt.on_episode(ep, env.log(), metrics);
    if (opt.progress) {
      const auto& ma = detector.moving_average();
      char line[160];
      std::snprintf(line, sizeof line, "episode %d arpt %.4f arpt_ma %s ssn %d converged %d\n", ep,
                    metrics.arpt, ma.empty() ? "nan" : std::to_string(ma[0]).c_str(), metrics.ssn,
                    detector.converged() ? 1 : 0);
      *opt.progress << line << std::flush;
    }
  }
  res.converged = detector.converged();
  res.converged_episode = detector.converged_at();
  res.critic_updates = agent.critic_updates();
  res.actor_updates = agent.actor_updates();
  res.diagnostics = agent.diagnostics();
  return res;
}

}  // namespace usvauv::rl
