#pragma once

// TD3 learner: deterministic tanh actor, twin critics with clipped double-Q
// targets, target-policy smoothing, delayed actor updates and Polyak targets.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "usvauv/rl/mlp.hpp"
#include "usvauv/rl/optimizer.hpp"
#include "usvauv/rl/replay_buffer.hpp"

namespace usvauv::rl {

struct Td3Hyper {
  double gamma = 0.97;
  double tau = 1e-3;
  double lr_actor = 1e-3;
  double lr_critic = 1e-3;
  int batch = 64;
  int policy_delay = 2;
  double target_noise_sigma = 0.1;
  double target_noise_clip = 1.0;
  double explore_sigma = 0.1;
  int warmup_steps = 1000;
  int episodes = 450;
  int steps_per_episode = 1000;
  std::size_t buffer_capacity = 20000;
  int hidden = 128;
  OptimizerKind optimizer = OptimizerKind::Sgd;
  AdamParams adam;
  // Multiplies rewards before they enter the replay buffer.
  double reward_scale = 1.0;

  void validate() const;
  // FNV-1a over every field; stored in checkpoints.
  std::uint64_t hash() const;
};

struct TargetDiagnostics {
  long samples = 0;
  long min_bound_violations = 0;
  long clip_violations = 0;
  double max_abs_perturbation = 0.0;
};

struct CriticLosses {
  double q1 = 0.0;
  double q2 = 0.0;
};

// Mean over the batch of (Q(s, a) - y)^2. Adds d/dparams into grad if given.
double critic_loss(const Mlp& q, std::span<const double> s, std::span<const double> a,
                   std::span<const double> y, int batch, std::vector<double>* grad);

// Mean over the batch of Q(s, pi(s)). Adds d/d(actor params) into grad if given.
double actor_objective(const Mlp& actor, const Mlp& q, std::span<const double> s, int batch,
                       std::vector<double>* grad);

// Row-wise concatenation [s | a].
std::vector<double> concat_rows(std::span<const double> s, int sd, std::span<const double> a,
                                int ad, int batch);

class Td3Agent {
 public:
  Td3Agent(int state_dim, int action_dim, const Td3Hyper& hyper, std::uint64_t seed);

  int state_dim() const { return sd_; }
  int action_dim() const { return ad_; }
  const Td3Hyper& hyper() const { return hyper_; }
  std::uint64_t seed() const { return seed_; }

  std::vector<double> act(std::span<const double> s) const;
  // Actor output plus N(0, sigma) per component, clamped to [-1, 1].
  std::vector<double> select_action(std::span<const double> s, std::mt19937_64& rng,
                                    double sigma) const;
  // Target actor output plus clip(eps, -c, c), clamped to [-1, 1]. eps is the raw draw.
  std::vector<double> target_action_with_noise(std::span<const double> s_next,
                                               std::span<const double> eps) const;
  std::vector<double> target_action(std::span<const double> s_next, std::mt19937_64& rng) const;

  // y = r + (1 - done) * gamma * min(Q1', Q2') at the smoothed target action.
  std::vector<double> compute_targets(const Batch& b);
  static double bellman_target(double r, bool done, double gamma, double q1, double q2);

  CriticLosses update_critics(const Batch& b, std::span<const double> y);
  double update_actor(const Batch& b);
  void soft_update_targets();

  // One learner tick on a fresh minibatch: critics always; actor and targets
  // every policy_delay ticks.
  void train_step(const ReplayBuffer& buffer);

  long critic_updates() const { return critic_updates_; }
  long actor_updates() const { return actor_updates_; }
  const TargetDiagnostics& diagnostics() const { return diag_; }
  const CriticLosses& last_losses() const { return last_losses_; }

  Mlp& actor() { return nets_[0]; }
  Mlp& critic1() { return nets_[1]; }
  Mlp& critic2() { return nets_[2]; }
  Mlp& actor_target() { return nets_[3]; }
  Mlp& critic1_target() { return nets_[4]; }
  Mlp& critic2_target() { return nets_[5]; }
  const Mlp& actor() const { return nets_[0]; }
  const Mlp& critic1() const { return nets_[1]; }
  const Mlp& critic2() const { return nets_[2]; }
  // Order: actor, critic1, critic2, then their targets.
  std::array<Mlp, 6>& networks() { return nets_; }
  const std::array<Mlp, 6>& networks() const { return nets_; }

 private:
  int sd_;
  int ad_;
  Td3Hyper hyper_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::array<Mlp, 6> nets_;
  Optimizer opt_actor_;
  Optimizer opt_c1_;
  Optimizer opt_c2_;
  Batch batch_;
  long critic_updates_ = 0;
  long actor_updates_ = 0;
  TargetDiagnostics diag_;
  CriticLosses last_losses_;
};

}  // namespace usvauv::rl
