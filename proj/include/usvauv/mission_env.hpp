#pragma once

// Multi-AUV underwater data-collection MDP. AUVs drive toward assigned seabed
// sensor nodes (SNs) through the disturbed sea, drain their buffers over an
// acoustic link, and are tracked by a USV-mounted USBL whose position is either
// FIM-planned or fixed.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "usvauv/fim_planner.hpp"
#include "usvauv/sea_env.hpp"
#include "usvauv/usbl.hpp"

namespace usvauv::mission {

struct LinkBudget {
  double source_level_db = 135.0;
  double noise_level_db = 50.0;
  double bandwidth_hz = 5000.0;
  double freq_khz = 12.0;
};

struct MissionConfig {
  double x_max = 200.0;
  double y_max = 200.0;
  int n_poi = 60;
  double depth = 120.0;      // water depth
  double auv_depth = 60.0;   // AUV cruise depth
  double dt = 10.0;
  int episode_steps = 1000;
  double v_min = 0.5;
  double v_max = 2.0;
  double comm_range = 15.0;
  double collision_dist = 12.0;
  double usv_speed_max = 5.0;
  int n_auv = 2;

  double sn_capacity_bits = 4.0e6;
  double sn_fill_rate = 1000.0;      // bit/s
  double sn_initial_fill_max = 0.5;  // fraction of capacity

  double p_hotel = 25.0;  // W
  double c_p = 35.0;      // W s^3 / m^3
  double wave_drift_beta = 0.2;

  LinkBudget link;

  double boundary_norm() const;  // |[x_max, y_max]|
  int state_dim() const { return 6 + 2 * (n_auv - 1); }
  void validate() const;
};

struct RewardWeights {
  double w_dist = 0.6;
  double w_overflow = 0.05;
  double w_tl = 12.0;
  double w_energy = 0.085;
  double w_safety = 6.0;
  double safety_radius = 12.0;
  double w_border = 0.1;
  double energy_scale = 1.0;
  // Multiplies both the inter-AUV hinge and the border penalty.
  double safety_scale = 1.0;

  void validate() const;
};

struct RewardInputs {
  double d_target = 0.0;
  int n_do = 0;
  bool transmitted = false;
  double energy = 0.0;
  std::vector<double> neighbor_dists;
  bool border = false;
};

// Signed contributions; total() is their exact sum.
struct RewardTerms {
  double dist = 0.0;
  double overflow = 0.0;
  double tl = 0.0;
  double energy = 0.0;
  double safety = 0.0;
  double border = 0.0;

  double total() const { return dist + overflow + tl + energy + safety + border; }
};

RewardTerms reward_terms(const RewardInputs& in, const RewardWeights& w);
inline double reward(const RewardInputs& in, const RewardWeights& w) {
  return reward_terms(in, w).total();
}

struct ActionVector {
  double v_norm = 0.0;
  double theta_norm = 0.0;
};

struct MappedAction {
  double speed = 0.0;
  double heading = 0.0;
};

MappedAction map_action(const ActionVector& a, const MissionConfig& cfg);

double thorp_absorption_db_per_km(double f_khz);
double link_snr_db(double dist, const LinkBudget& link);
// Sonar-equation Shannon rate in bit/s; zero beyond comm_range.
double link_rate(double dist, const MissionConfig& cfg);

struct SensorNode {
  double x = 0.0;
  double y = 0.0;
  double buffer = 0.0;
  double capacity = 0.0;
  double fill_rate = 0.0;
  bool overflowed = false;
  bool serviced = false;
  double initial_bits = 0.0;
  double filled_bits = 0.0;
  double delivered_bits = 0.0;
};

struct AuvAgentState {
  double x = 0.0;
  double y = 0.0;
  double speed = 0.0;
  double heading = 0.0;
  int target_id = -1;
  double energy_step = 0.0;
  double trajectory_len = 0.0;
  int border_flag = 0;
};

enum class UsvMode { FimPlanned, Fixed };

struct UsvModeSpec {
  UsvMode mode = UsvMode::FimPlanned;
  double x = 0.0;
  double y = 0.0;
};

struct EnvConfig {
  MissionConfig mission;
  RewardWeights reward;
  sea::SeaConfig sea;
  usbl::UsblConfig usbl;
  fim::PlannerConfig planner;
  UsvModeSpec usv;
};

struct AuvStepRecord {
  double x = 0.0;
  double y = 0.0;
  double v_norm = 0.0;
  double theta_norm = 0.0;
  double speed = 0.0;
  double heading = 0.0;
  double moved = 0.0;
  double power = 0.0;
  int target_id = -1;
  int border = 0;
  int transmitted = 0;
  double transfer_bits = 0.0;
  double pos_error = 0.0;
  RewardTerms terms;
};

struct StepRecord {
  int step = 0;
  double t = 0.0;
  double usv_x = 0.0;
  double usv_y = 0.0;
  double usv_eta = 0.0;
  double fim_det = 0.0;
  int n_do = 0;
  int violations = 0;
  std::vector<AuvStepRecord> auvs;
};

struct EpisodeLog {
  std::uint64_t seed = 0;
  double dt = 0.0;
  int n_poi = 0;
  std::vector<StepRecord> steps;
};

struct EpisodeMetrics {
  double sdr = 0.0;  // Mbps
  double ec = 0.0;   // W, mean per-step total power
  double arpt = 0.0;
  int ssn = 0;
  std::vector<double> traj_lens;
  double pos_error_mean = 0.0;
  int violations = 0;
};

// Pure fold over a (possibly partial) episode log.
EpisodeMetrics collect_metrics(const EpisodeLog& log);

using StateVector = std::vector<double>;

struct StepResult {
  std::vector<StateVector> states;
  std::vector<double> rewards;
  bool done = false;
};

class MissionEnv {
 public:
  explicit MissionEnv(EnvConfig cfg);

  const EnvConfig& config() const { return cfg_; }
  int n_auv() const { return cfg_.mission.n_auv; }
  int state_dim() const { return cfg_.mission.state_dim(); }

  std::vector<StateVector> reset(std::uint64_t seed);
  StepResult step(std::span<const ActionVector> actions);

  std::vector<StateVector> observe() const;
  StateVector observe(int k) const;

  // Greedy nearest-unserviced-SN assignment for AUVs that need a target.
  void assign_targets();

  const std::vector<SensorNode>& nodes() const { return nodes_; }
  const std::vector<AuvAgentState>& auvs() const { return auvs_; }
  const usbl::UsvState& usv() const { return usv_; }
  const sea::SeaState& sea() const { return *sea_; }
  const EpisodeLog& log() const { return log_; }
  int step_index() const { return step_; }
  bool done() const { return step_ >= cfg_.mission.episode_steps; }
  int overflow_count() const;
  double time() const { return step_ * cfg_.mission.dt; }

  // Scenario hooks for scripted set-ups and tests.
  void place_auv(int k, double x, double y);
  void set_target(int k, int node);
  std::vector<SensorNode>& mutable_nodes() { return nodes_; }

 private:
  void require_active() const;
  void move_usv();
  usbl::AuvTruth truth(int k) const;

  EnvConfig cfg_;
  std::vector<usbl::UsblConfig> usbl_cfgs_;
  std::uint64_t seed_ = 0;
  std::mt19937_64 rng_;
  std::mt19937_64 usbl_rng_;
  std::unique_ptr<sea::SeaState> sea_;
  std::vector<SensorNode> nodes_;
  std::vector<AuvAgentState> auvs_;
  std::vector<bool> needs_target_;
  usbl::UsvState usv_;
  double last_det_ = 0.0;
  int step_ = 0;
  bool started_ = false;
  EpisodeLog log_;
};

}  // namespace usvauv::mission
