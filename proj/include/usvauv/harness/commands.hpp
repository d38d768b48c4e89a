#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "usvauv/harness/config.hpp"
#include "usvauv/rl/trainer.hpp"

namespace usvauv::harness {

struct CommandLine {
  std::string command;
  std::string config_path;
  std::optional<std::string> seeds;
  std::optional<std::string> out;
  std::optional<std::string> profile;
  std::vector<std::string> usv_modes;
  std::optional<double> oracle_grid;
  std::optional<std::string> checkpoint;
  // Extra key=value overrides applied last.
  std::vector<std::string> sets;
  bool quiet = false;
};

// Config file (optional), then --profile, then flag overrides, then validation.
RunConfig load_config(const CommandLine& cl);

// Dispatches the subcommand. Returns 0, 2 (config error) or 3 (runtime fault).
int run_command(const CommandLine& cl, std::ostream& out, std::ostream& err);

std::string run_id(const RunConfig& cfg, std::uint64_t seed);

struct TrainRun {
  std::filesystem::path dir;
  rl::TrainResult result;
  std::shared_ptr<rl::Td3Agent> agent;
};
// Trains one seed and writes its run directory under cfg.output_dir.
TrainRun train_seed(const RunConfig& cfg, std::uint64_t seed, std::ostream* progress);

struct EvalRun {
  std::filesystem::path dir;
  std::vector<mission::EpisodeMetrics> episodes;
  double pos_error_mean = 0.0;
  double fim_det_mean = 0.0;
};
// Evaluates cfg.eval_policy for cfg.eval_episodes under cfg.env.usv for one seed.
EvalRun eval_seed(const RunConfig& cfg, std::uint64_t seed);

}  // namespace usvauv::harness
