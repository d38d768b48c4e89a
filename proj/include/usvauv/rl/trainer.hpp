#pragma once

// Algorithm-1 training loop over the multi-AUV mission environment with one
// shared actor. Each env step stores one transition per AUV.

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "usvauv/mission_env.hpp"
#include "usvauv/rl/convergence.hpp"
#include "usvauv/rl/td3.hpp"

namespace usvauv::rl {

struct CurveRow {
  int episode = 0;
  double arpt = 0.0;
  double sdr = 0.0;
  double ec = 0.0;
  int ssn = 0;
};

std::string curves_csv_header();
void write_curve_row(std::ostream& os, const CurveRow& row);

struct TrainOptions {
  std::uint64_t seed = 0;
  ConvergenceRule rule;
  std::ostream* progress = nullptr;
  std::function<void(int, const mission::EpisodeLog&, const mission::EpisodeMetrics&)> on_episode;
};

struct TrainResult {
  std::vector<CurveRow> curves;
  std::vector<mission::EpisodeMetrics> metrics;
  bool converged = false;
  int converged_episode = -1;
  long env_steps = 0;
  long critic_updates = 0;
  long actor_updates = 0;
  std::size_t max_buffer_size = 0;
  TargetDiagnostics diagnostics;
};

// Env seed for a training or evaluation episode.
std::uint64_t episode_seed(std::uint64_t run_seed, int episode);

// Metrics fed to the convergence detector: ARPT, SDR, EC.
std::vector<double> convergence_metrics(const mission::EpisodeMetrics& m);

// Uses agent.hyper().episodes; episode length comes from the environment.
TrainResult train(mission::MissionEnv& env, Td3Agent& agent, const TrainOptions& opt);

}  // namespace usvauv::rl
