#pragma once

// Run configuration: INI-style text with optional [section] headers and
// `key = value` lines. Key names are unique across sections, so a key may be
// written bare or under its own section. '#' starts a comment; ';' does
// too, but only at the start of a line.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "usvauv/mission_env.hpp"
#include "usvauv/rl/convergence.hpp"
#include "usvauv/rl/td3.hpp"

namespace usvauv::harness {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct RunConfig {
  mission::EnvConfig env;
  rl::Td3Hyper hyper;
  rl::ConvergenceRule convergence;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string output_dir = "runs";
  std::string profile = "paper";
  int eval_episodes = 20;
  // eval policy: checkpoint | scripted | random
  std::string eval_policy = "checkpoint";
  std::string checkpoint;
  // Per-step JSONL records for every log_every-th training episode (and the last).
  int log_every = 10;
  // sweep: parameter name, values and what runs at each point (train | eval)
  std::string sweep_param;
  std::vector<double> sweep_values;
  std::string sweep_mode = "eval";
  // plan
  std::vector<Point2> auv_positions{{25.0, 93.0}, {95.0, 40.0}};
  double oracle_grid = 0.0;
  // simulate-sea
  std::vector<double> sea_times{25.0, 50.0, 75.0};

  // Cross-field checks; throws ConfigError.
  void validate() const;
};

RunConfig parse_config_text(std::string_view text, std::string_view origin = "<config>");
RunConfig parse_config_file(const std::filesystem::path& path);

// Applies one `key = value` assignment (used for CLI overrides and sweeps).
void set_key(RunConfig& cfg, std::string_view key, std::string_view value);
std::vector<std::string> known_keys();

// desk: 120 episodes, 30 SNs, 50 x 50 wave grid. toy: the single-AUV check
// task. paper: full-scale defaults.
void apply_profile(RunConfig& cfg, std::string_view name);

mission::UsvModeSpec parse_usv_mode(std::string_view text);
std::string format_usv_mode(const mission::UsvModeSpec& m);
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

// Fully resolved config, every key, doubles printed with %.17g. Parsing the
// echo reproduces the config exactly.
std::string resolved_text(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace usvauv::harness
