#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "usvauv/errors.hpp"
#include "usvauv/mission_env.hpp"

namespace usvauv::mission {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

bool inside(double x, double y, const MissionConfig& c) {
  return x >= 0.0 && x <= c.x_max && y >= 0.0 && y <= c.y_max;
}

}  // namespace

double MissionConfig::boundary_norm() const { return std::hypot(x_max, y_max); }

void MissionConfig::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("mission ") + name + " must be > 0");
  };
  positive(x_max, "x_max");
  positive(y_max, "y_max");
  positive(depth, "depth");
  positive(auv_depth, "auv_depth");
  positive(dt, "dt");
  positive(v_min, "v_min");
  positive(v_max, "v_max");
  positive(comm_range, "comm_range");
  positive(collision_dist, "collision_dist");
  positive(usv_speed_max, "usv_speed_max");
  positive(sn_capacity_bits, "sn_capacity_bits");
  positive(link.bandwidth_hz, "link bandwidth");
  if (n_poi < 1) throw ConfigError("mission n_poi must be >= 1");
  if (episode_steps < 1) throw ConfigError("mission episode_steps must be >= 1");
  if (n_auv < 1 || n_auv > 4) throw ConfigError("mission n_auv must be in 1..4");
  if (auv_depth > depth) throw ConfigError("AUV depth exceeds water depth");
  if (v_min > v_max) throw ConfigError("v_min exceeds v_max");
  if (!(collision_dist < x_max / 4.0)) throw ConfigError("collision_dist must be < x_max / 4");
  if (sn_fill_rate < 0.0 || sn_initial_fill_max < 0.0 || sn_initial_fill_max > 1.0)
    throw ConfigError("sensor-node fill parameters out of range");
  if (p_hotel < 0.0 || c_p < 0.0 || wave_drift_beta < 0.0)
    throw ConfigError("energy/drift coefficients must be >= 0");
}

void RewardWeights::validate() const {
  for (double w : {w_dist, w_overflow, w_tl, w_energy, w_safety, safety_radius, w_border,
                   energy_scale, safety_scale})
    if (!(w >= 0.0)) throw ConfigError("reward weights must be >= 0");
}

RewardTerms reward_terms(const RewardInputs& in, const RewardWeights& w) {
  RewardTerms t;
  t.dist = -w.w_dist * in.d_target;
  t.overflow = -w.w_overflow * static_cast<double>(in.n_do);
  t.tl = in.transmitted ? w.w_tl : 0.0;
  t.energy = -w.w_energy * w.energy_scale * in.energy;
  for (double d : in.neighbor_dists)
    if (d < w.safety_radius) t.safety -= w.w_safety * w.safety_scale * (w.safety_radius - d);
  t.border = in.border ? -w.w_border * w.safety_scale : 0.0;
  return t;
}

MappedAction map_action(const ActionVector& a, const MissionConfig& cfg) {
  const double v = std::clamp(a.v_norm, -1.0, 1.0);
  const double th = std::clamp(a.theta_norm, -1.0, 1.0);
  return {cfg.v_min + (v + 1.0) * (cfg.v_max - cfg.v_min) / 2.0, std::numbers::pi * th};
}

MissionEnv::MissionEnv(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.mission.validate();
  cfg_.reward.validate();
  cfg_.usbl.validate();
  cfg_.planner.validate();
  usbl_cfgs_ = usbl::per_auv_configs(cfg_.usbl, cfg_.mission.n_auv);
}

void MissionEnv::require_active() const {
  if (!started_) throw SimulationFault("step() called before reset()");
  if (done()) throw SimulationFault("step() called on a finished episode");
}

std::vector<StateVector> MissionEnv::reset(std::uint64_t seed) {
  const auto& m = cfg_.mission;
  seed_ = seed;
  rng_.seed(seed);
  usbl_rng_.seed(splitmix64(seed ^ 0x55B1ULL));
  step_ = 0;
  started_ = true;
  last_det_ = 0.0;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  nodes_.assign(static_cast<std::size_t>(m.n_poi), {});
  for (auto& n : nodes_) {
    n.x = unit(rng_) * m.x_max;
    n.y = unit(rng_) * m.y_max;
    n.capacity = m.sn_capacity_bits;
    n.fill_rate = m.sn_fill_rate;
    n.buffer = unit(rng_) * m.sn_initial_fill_max * n.capacity;
    n.initial_bits = n.buffer;
  }

  auvs_.assign(static_cast<std::size_t>(m.n_auv), {});
  const double min_sep = 2.0 * m.collision_dist;
  for (std::size_t k = 0; k < auvs_.size(); ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      const double x = unit(rng_) * m.x_max, y = unit(rng_) * m.y_max;
      placed = std::all_of(auvs_.begin(), auvs_.begin() + static_cast<long>(k),
                           [&](const AuvAgentState& o) { return std::hypot(o.x - x, o.y - y) >= min_sep; });
      if (placed) {
        auvs_[k].x = x;
        auvs_[k].y = y;
      }
    }
    if (!placed) throw ConfigError("could not spawn AUVs 2*collision_dist apart in 1000 attempts");
  }

  sea_ = std::make_unique<sea::SeaState>(cfg_.sea, m.x_max, m.y_max, rng_);

  needs_target_.assign(auvs_.size(), true);
  assign_targets();

  if (cfg_.usv.mode == UsvMode::Fixed) {
    usv_.x = cfg_.usv.x;
    usv_.y = cfg_.usv.y;
  } else {
    usv_.x = 0.5 * m.x_max;
    usv_.y = 0.5 * m.y_max;
  }
  usv_.eta = sea_->sample(usv_.x, usv_.y).eta;

  log_ = EpisodeLog{};
  log_.seed = seed;
  log_.dt = m.dt;
  log_.n_poi = m.n_poi;
  log_.steps.reserve(static_cast<std::size_t>(m.episode_steps));
  return observe();
}

void MissionEnv::assign_targets() {
  std::vector<bool> taken(nodes_.size(), false);
  for (std::size_t k = 0; k < auvs_.size(); ++k)
    if (!needs_target_[k] && auvs_[k].target_id >= 0)
      taken[static_cast<std::size_t>(auvs_[k].target_id)] = true;
  for (std::size_t k = 0; k < auvs_.size(); ++k) {
    if (!needs_target_[k]) continue;
    int best = -1;
    double best_d = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].serviced || taken[i]) continue;
      const double d = std::hypot(nodes_[i].x - auvs_[k].x, nodes_[i].y - auvs_[k].y);
      if (best < 0 || d < best_d) {
        best = static_cast<int>(i);
        best_d = d;
      }
    }
    if (best >= 0) {
      auvs_[k].target_id = best;
      taken[static_cast<std::size_t>(best)] = true;
    }
    needs_target_[k] = false;
  }
}

int MissionEnv::overflow_count() const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                        [](const SensorNode& n) { return n.overflowed; }));
}

usbl::AuvTruth MissionEnv::truth(int k) const {
  const auto& a = auvs_[static_cast<std::size_t>(k)];
  return {a.x, a.y, cfg_.mission.auv_depth};
}

void MissionEnv::move_usv() {
  const auto& m = cfg_.mission;
  if (cfg_.usv.mode == UsvMode::FimPlanned) {
    std::vector<usbl::AuvTruth> truths;
    for (int k = 0; k < n_auv(); ++k) truths.push_back(truth(k));
    fim::PlannerConfig plan = cfg_.planner;
    plan.seed = splitmix64(seed_ * 1000003ULL + static_cast<std::uint64_t>(step_) + cfg_.planner.seed);
    const fim::Waypoint w = fim::plan_waypoint(truths, usbl_cfgs_, plan, usv_.eta);
    const double dx = w.x - usv_.x, dy = w.y - usv_.y;
    const double dist = std::hypot(dx, dy);
    const double reach = m.usv_speed_max * m.dt;
    if (dist <= reach) {
      usv_.x = w.x;
      usv_.y = w.y;
    } else {
      usv_.x += dx / dist * reach;
      usv_.y += dy / dist * reach;
    }
  }
  usv_.eta = sea_->sample(usv_.x, usv_.y).eta;
}

StepResult MissionEnv::step(std::span<const ActionVector> actions) {
  require_active();
  const auto& m = cfg_.mission;
  if (static_cast<int>(actions.size()) != n_auv())
    throw SimulationFault("expected " + std::to_string(n_auv()) + " actions");

  StepRecord rec;
  rec.step = step_;
  rec.auvs.resize(auvs_.size());

  for (std::size_t k = 0; k < auvs_.size(); ++k) {
    auto& a = auvs_[k];
    auto& r = rec.auvs[k];
    const MappedAction ma = map_action(actions[k], m);
    r.v_norm = actions[k].v_norm;
    r.theta_norm = actions[k].theta_norm;
    const double cx = std::cos(ma.heading), sy = std::sin(ma.heading);
    const double px = a.x + ma.speed * m.dt * cx, py = a.y + ma.speed * m.dt * sy;
    a.border_flag = inside(px, py, m) ? 0 : 1;

    const sea::SeaSample s = sea_->sample(a.x, a.y);
    const double vx = ma.speed * cx + s.turb_u + m.wave_drift_beta * s.wave_u;
    const double vy = ma.speed * sy + s.turb_v + m.wave_drift_beta * s.wave_v;
    const double nx = std::clamp(a.x + vx * m.dt, 0.0, m.x_max);
    const double ny = std::clamp(a.y + vy * m.dt, 0.0, m.y_max);
    r.moved = std::hypot(nx - a.x, ny - a.y);
    a.trajectory_len += r.moved;
    a.x = nx;
    a.y = ny;
    a.speed = ma.speed;
    a.heading = ma.heading;
    a.energy_step = m.p_hotel + m.c_p * ma.speed * ma.speed * ma.speed;
    r.speed = ma.speed;
    r.heading = ma.heading;
    r.power = a.energy_step;
    r.border = a.border_flag;
  }

  sea_->advance_to(static_cast<double>(step_ + 1) * m.dt);

  for (auto& n : nodes_) {
    const double add = std::min(n.fill_rate * m.dt, n.capacity - n.buffer);
    n.buffer += add;
    n.filled_bits += add;
    if (n.buffer >= n.capacity && !n.serviced) n.overflowed = true;
  }

  for (std::size_t k = 0; k < auvs_.size(); ++k) {
    auto& a = auvs_[k];
    auto& r = rec.auvs[k];
    r.target_id = a.target_id;
    if (a.target_id < 0) continue;
    auto& n = nodes_[static_cast<std::size_t>(a.target_id)];
    if (n.serviced) continue;
    const double rate = link_rate(std::hypot(n.x - a.x, n.y - a.y), m);
    if (rate <= 0.0) continue;
    const double bits = std::min(n.buffer, rate * m.dt);
    n.buffer -= bits;
    n.delivered_bits += bits;
    r.transfer_bits = bits;
    if (n.buffer <= 0.0) {
      n.buffer = 0.0;
      n.serviced = true;
      n.overflowed = false;
      r.transmitted = 1;
      needs_target_[k] = true;
    }
  }
  for (std::size_t k = 0; k < auvs_.size(); ++k) {
    const int t = auvs_[k].target_id;
    if (t >= 0 && nodes_[static_cast<std::size_t>(t)].overflowed) needs_target_[k] = true;
  }
  assign_targets();

  const int n_do = overflow_count();
  rec.n_do = n_do;
  StepResult out;
  out.rewards.resize(auvs_.size());
  for (std::size_t k = 0; k < auvs_.size(); ++k) {
    const auto& a = auvs_[k];
    RewardInputs in;
    if (a.target_id >= 0) {
      const auto& n = nodes_[static_cast<std::size_t>(a.target_id)];
      in.d_target = std::hypot(n.x - a.x, n.y - a.y);
    }
    in.n_do = n_do;
    in.transmitted = rec.auvs[k].transmitted != 0;
    in.energy = a.energy_step;
    in.border = a.border_flag != 0;
    for (std::size_t j = 0; j < auvs_.size(); ++j)
      if (j != k) in.neighbor_dists.push_back(std::hypot(auvs_[j].x - a.x, auvs_[j].y - a.y));
    rec.auvs[k].terms = reward_terms(in, cfg_.reward);
    out.rewards[k] = rec.auvs[k].terms.total();
    rec.violations += a.border_flag;
    for (std::size_t j = k + 1; j < auvs_.size(); ++j)
      if (std::hypot(auvs_[j].x - a.x, auvs_[j].y - a.y) < m.collision_dist) ++rec.violations;
  }

  move_usv();
  std::vector<usbl::AuvTruth> truths;
  for (int k = 0; k < n_auv(); ++k) truths.push_back(truth(k));
  const double wave_speed = [&] {
    const sea::SeaSample s = sea_->sample(usv_.x, usv_.y);
    return std::hypot(s.wave_u, s.wave_v);
  }();
  for (std::size_t k = 0; k < auvs_.size(); ++k) {
    const auto meas = usbl::measure(usv_, truths[k], usbl_cfgs_[k], usbl_rng_, wave_speed);
    const auto est = usbl::localize(meas, usv_, usbl_cfgs_[k]);
    rec.auvs[k].pos_error = usbl::positioning_error(est, truths[k]);
  }
  try {
    last_det_ = fim::det_fim(usv_, truths, usbl_cfgs_);
  } catch (const DegenerateGeometry&) {
    last_det_ = 0.0;
  }

  ++step_;
  rec.t = time();
  rec.usv_x = usv_.x;
  rec.usv_y = usv_.y;
  rec.usv_eta = usv_.eta;
  rec.fim_det = last_det_;
  for (std::size_t k = 0; k < auvs_.size(); ++k) {
    rec.auvs[k].x = auvs_[k].x;
    rec.auvs[k].y = auvs_[k].y;
  }

  out.states = observe();
  out.done = done();
  for (std::size_t k = 0; k < auvs_.size(); ++k) {
    bool finite = std::isfinite(out.rewards[k]);
    for (double s : out.states[k]) finite = finite && std::isfinite(s);
    if (!finite)
      throw SimulationFault("non-finite state or reward for AUV " + std::to_string(k) +
                            " at step " + std::to_string(rec.step));
  }
  log_.steps.push_back(std::move(rec));
  return out;
}

StateVector MissionEnv::observe(int k) const {
  const auto& m = cfg_.mission;
  const double b = m.boundary_norm();
  const auto& self = auvs_[static_cast<std::size_t>(k)];
  StateVector s;
  s.reserve(static_cast<std::size_t>(state_dim()));
  for (std::size_t j = 0; j < auvs_.size(); ++j) {
    if (static_cast<int>(j) == k) continue;
    s.push_back((auvs_[j].x - self.x) / b);
    s.push_back((auvs_[j].y - self.y) / b);
  }
  if (self.target_id >= 0) {
    const auto& n = nodes_[static_cast<std::size_t>(self.target_id)];
    s.push_back((n.x - self.x) / b);
    s.push_back((n.y - self.y) / b);
  } else {
    s.push_back(0.0);
    s.push_back(0.0);
  }
  s.push_back(self.x / b);
  s.push_back(self.y / b);
  s.push_back(static_cast<double>(overflow_count()) / static_cast<double>(m.n_poi));
  s.push_back(static_cast<double>(self.border_flag));
  return s;
}

std::vector<StateVector> MissionEnv::observe() const {
  std::vector<StateVector> out;
  for (int k = 0; k < n_auv(); ++k) out.push_back(observe(k));
  return out;
}

void MissionEnv::place_auv(int k, double x, double y) {
  if (k < 0 || k >= n_auv()) throw DomainError("AUV index out of range");
  if (!inside(x, y, cfg_.mission)) throw DomainError("AUV placement outside the mission area");
  auvs_[static_cast<std::size_t>(k)].x = x;
  auvs_[static_cast<std::size_t>(k)].y = y;
}

void MissionEnv::set_target(int k, int node) {
  if (k < 0 || k >= n_auv()) throw DomainError("AUV index out of range");
  if (node < -1 || node >= static_cast<int>(nodes_.size())) throw DomainError("SN index out of range");
  auvs_[static_cast<std::size_t>(k)].target_id = node;
  // -1 releases the AUV so the next assign_targets() picks for it.
  needs_target_[static_cast<std::size_t>(k)] = node < 0;
}

}  // namespace usvauv::mission
