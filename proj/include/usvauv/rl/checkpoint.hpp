#pragma once

// Portable checkpoint: little-endian header (magic, version, state and action
// widths, seed, hyper hash, per-network layer widths) followed by every network's
// parameters as IEEE doubles and an FNV-1a checksum over all preceding bytes.

#include <cstdint>
#include <filesystem>

#include "usvauv/rl/td3.hpp"

namespace usvauv::rl {

struct CheckpointHeader {
  int state_dim = 0;
  int action_dim = 0;
  std::uint64_t seed = 0;
  std::uint64_t hyper_hash = 0;
};

void save_checkpoint(const std::filesystem::path& path, const Td3Agent& agent);
// Validates the whole file before touching the agent. Throws CheckpointError on
// truncation, checksum failure or width mismatch.
CheckpointHeader load_checkpoint(const std::filesystem::path& path, Td3Agent& agent);
CheckpointHeader read_checkpoint_header(const std::filesystem::path& path);

}  // namespace usvauv::rl
