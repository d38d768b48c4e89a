#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "usvauv/mission_env.hpp"

namespace usvauv::mission {

// Columns: episode,seed,sdr_mbps,ec_w,arpt,ssn,traj_len_auv1..4,pos_err_mean_m,violations.
// Trajectory columns beyond n_auv are left empty.
std::string metrics_csv_header();
void write_metrics_row(std::ostream& os, int episode, std::uint64_t seed, const EpisodeMetrics& m);

// JSON lines, one record per step: USV pose, FIM det and per-AUV position,
// action, target, transfer, positioning error and reward terms.
void write_episode_jsonl(std::ostream& os, int episode, const EpisodeLog& log);

}  // namespace usvauv::mission
