#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "usvauv/errors.hpp"
#include "usvauv/harness/config.hpp"

namespace usvauv::harness {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? s.npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

double to_double(std::string_view v) {
  double x = 0.0;
  const auto t = trim(v);
  const auto r = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size() || !std::isfinite(x))
    throw ConfigError("expected a number, got '" + std::string(v) + "'");
  return x;
}

long long to_int(std::string_view v) {
  long long x = 0;
  const auto t = trim(v);
  const auto r = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
    throw ConfigError("expected an integer, got '" + std::string(v) + "'");
  return x;
}

bool to_bool(std::string_view v) {
  const auto t = trim(v);
  if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "off" || t == "no") return false;
  throw ConfigError("expected a boolean, got '" + std::string(v) + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class Vec, class F>
std::string join(const Vec& v, F f, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += f(v[i]);
  }
  return out;
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class Acc>
Key dbl(const char* sec, const char* name, Acc acc) {
  return {sec, name, [acc](RunConfig& c, std::string_view v) { acc(c) = to_double(v); },
          [acc](const RunConfig& c) { return fmt(acc(const_cast<RunConfig&>(c))); }};
}

template <class Acc>
Key integer(const char* sec, const char* name, Acc acc) {
  return {sec, name,
          [acc](RunConfig& c, std::string_view v) {
            using T = std::remove_reference_t<decltype(acc(c))>;
            const long long x = to_int(v);
            if (x < 0 && std::is_unsigned_v<T>) throw ConfigError("expected a non-negative integer");
            acc(c) = static_cast<T>(x);
          },
          [acc](const RunConfig& c) { return std::to_string(acc(const_cast<RunConfig&>(c))); }};
}

template <class Acc>
Key boolean(const char* sec, const char* name, Acc acc) {
  return {sec, name, [acc](RunConfig& c, std::string_view v) { acc(c) = to_bool(v); },
          [acc](const RunConfig& c) { return std::string(acc(const_cast<RunConfig&>(c)) ? "true" : "false"); }};
}

template <class Acc>
Key text(const char* sec, const char* name, Acc acc) {
  return {sec, name, [acc](RunConfig& c, std::string_view v) { acc(c) = std::string(trim(v)); },
          [acc](const RunConfig& c) { return acc(const_cast<RunConfig&>(c)); }};
}

std::vector<double> parse_doubles(std::string_view v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (auto p : split(v, ',')) out.push_back(to_double(p));
  return out;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = [] {
    std::vector<Key> t;
    using C = RunConfig;
#define M(field) [](C& c) -> auto& { return c.env.mission.field; }
    t.push_back(dbl("mission", "x_max", M(x_max)));
    t.push_back(dbl("mission", "y_max", M(y_max)));
    t.push_back(integer("mission", "n_poi", M(n_poi)));
    t.push_back(dbl("mission", "depth", M(depth)));
    t.push_back(dbl("mission", "auv_depth", M(auv_depth)));
    t.push_back(dbl("mission", "dt", M(dt)));
    t.push_back(dbl("mission", "v_min", M(v_min)));
    t.push_back(dbl("mission", "v_max", M(v_max)));
    t.push_back(dbl("mission", "comm_range", M(comm_range)));
    t.push_back(dbl("mission", "collision_dist", M(collision_dist)));
    t.push_back(dbl("mission", "usv_speed_max", M(usv_speed_max)));
    t.push_back(integer("mission", "n_auv", M(n_auv)));
    t.push_back(dbl("mission", "sn_capacity_bits", M(sn_capacity_bits)));
    t.push_back(dbl("mission", "sn_fill_rate", M(sn_fill_rate)));
    t.push_back(dbl("mission", "sn_initial_fill_max", M(sn_initial_fill_max)));
    t.push_back(dbl("mission", "p_hotel", M(p_hotel)));
    t.push_back(dbl("mission", "c_p", M(c_p)));
    t.push_back(dbl("mission", "wave_drift_beta", M(wave_drift_beta)));
    t.push_back(dbl("mission", "source_level_db", M(link.source_level_db)));
    t.push_back(dbl("mission", "noise_level_db", M(link.noise_level_db)));
    t.push_back(dbl("mission", "bandwidth_hz", M(link.bandwidth_hz)));
    t.push_back(dbl("mission", "link_freq_khz", M(link.freq_khz)));
#undef M
#define R(field) [](C& c) -> auto& { return c.env.reward.field; }
    t.push_back(dbl("reward", "w_dist", R(w_dist)));
    t.push_back(dbl("reward", "w_overflow", R(w_overflow)));
    t.push_back(dbl("reward", "w_tl", R(w_tl)));
    t.push_back(dbl("reward", "w_energy", R(w_energy)));
    t.push_back(dbl("reward", "w_safety", R(w_safety)));
    t.push_back(dbl("reward", "safety_radius", R(safety_radius)));
    t.push_back(dbl("reward", "w_border", R(w_border)));
    t.push_back(dbl("reward", "energy_scale", R(energy_scale)));
    t.push_back(dbl("reward", "safety_scale", R(safety_scale)));
#undef R
#define S(field) [](C& c) -> auto& { return c.env.sea.field; }
    t.push_back(boolean("sea", "extreme_sea", S(enabled)));
    t.push_back(dbl("sea", "wave_dx", S(grid.dx)));
    t.push_back(dbl("sea", "wave_dy", S(grid.dy)));
    t.push_back(dbl("sea", "dt_sub", S(grid.dt_sub)));
    t.push_back(dbl("sea", "wave_depth", S(grid.depth_h)));
    t.push_back(dbl("sea", "gravity", S(grid.g)));
    t.push_back(boolean("sea", "forced_west_edge", S(grid.forced_west_edge)));
    t.push_back(dbl("sea", "eta0", S(forcing.amplitude)));
    t.push_back(dbl("sea", "omega", S(forcing.omega)));
    t.push_back(dbl("sea", "vortex_cell", S(vortices.quadrant)));
    t.push_back(dbl("sea", "vortex_gamma_min", S(vortices.gamma_min)));
    t.push_back(dbl("sea", "vortex_gamma_max", S(vortices.gamma_max)));
    t.push_back(dbl("sea", "vortex_delta_min", S(vortices.delta_min)));
    t.push_back(dbl("sea", "vortex_delta_max", S(vortices.delta_max)));
#undef S
#define U(field) [](C& c) -> auto& { return c.env.usbl.field; }
    t.push_back(dbl("usbl", "usbl_freq", U(freq)));
    t.push_back(dbl("usbl", "spacing_d", U(spacing_d)));
    t.push_back(dbl("usbl", "sound_speed", U(sound_speed_c)));
    t.push_back(dbl("usbl", "sigma_phase", U(sigma_phase)));
    t.push_back(dbl("usbl", "sigma_range", U(sigma_range)));
    t.push_back(dbl("usbl", "kappa", U(kappa)));
#undef U
#define P(field) [](C& c) -> auto& { return c.env.planner.field; }
    t.push_back(integer("planner", "pop_size", P(pop_size)));
    t.push_back(integer("planner", "nit", P(nit)));
    t.push_back(dbl("planner", "f_min", P(f_min)));
    t.push_back(dbl("planner", "f_max", P(f_max)));
    t.push_back(dbl("planner", "cr", P(cr)));
    t.push_back(integer("planner", "planner_seed", P(seed)));
    t.push_back(dbl("planner", "standoff_r_min", P(standoff_r_min)));
#undef P
#define H(field) [](C& c) -> auto& { return c.hyper.field; }
    t.push_back(dbl("td3", "gamma", H(gamma)));
    t.push_back(dbl("td3", "tau", H(tau)));
    t.push_back(dbl("td3", "lr_actor", H(lr_actor)));
    t.push_back(dbl("td3", "lr_critic", H(lr_critic)));
    t.push_back(integer("td3", "batch", H(batch)));
    t.push_back(integer("td3", "policy_delay", H(policy_delay)));
    t.push_back(dbl("td3", "target_noise_sigma", H(target_noise_sigma)));
    t.push_back(dbl("td3", "target_noise_clip", H(target_noise_clip)));
    t.push_back(dbl("td3", "explore_sigma", H(explore_sigma)));
    t.push_back(integer("td3", "warmup_steps", H(warmup_steps)));
    t.push_back(integer("td3", "episodes", H(episodes)));
    t.push_back({"td3", "steps_per_episode",
                 [](C& c, std::string_view v) {
                   const long long n = to_int(v);
                   c.hyper.steps_per_episode = static_cast<int>(n);
                   c.env.mission.episode_steps = static_cast<int>(n);
                 },
                 [](const C& c) { return std::to_string(c.hyper.steps_per_episode); }});
    t.push_back(integer("td3", "buffer_capacity", H(buffer_capacity)));
    t.push_back(integer("td3", "hidden", H(hidden)));
    t.push_back({"td3", "optimizer",
                 [](C& c, std::string_view v) { c.hyper.optimizer = rl::parse_optimizer(trim(v)); },
                 [](const C& c) { return std::string(rl::optimizer_name(c.hyper.optimizer)); }});
    t.push_back(dbl("td3", "adam_beta1", H(adam.beta1)));
    t.push_back(dbl("td3", "adam_beta2", H(adam.beta2)));
    t.push_back(dbl("td3", "adam_eps", H(adam.eps)));
    t.push_back(dbl("td3", "reward_scale", H(reward_scale)));
#undef H
    t.push_back(integer("td3", "convergence_window", [](C& c) -> auto& { return c.convergence.window; }));
    t.push_back(dbl("td3", "convergence_slope", [](C& c) -> auto& { return c.convergence.slope_threshold; }));
    t.push_back(integer("td3", "convergence_run", [](C& c) -> auto& { return c.convergence.run_length; }));

    t.push_back({"run", "seeds", [](C& c, std::string_view v) { c.seeds = parse_seed_list(v); },
                 [](const C& c) { return join(c.seeds, [](std::uint64_t s) { return std::to_string(s); }); }});
    t.push_back(text("run", "output_dir", [](C& c) -> auto& { return c.output_dir; }));
    t.push_back(text("run", "profile", [](C& c) -> auto& { return c.profile; }));
    t.push_back({"run", "usv_mode", [](C& c, std::string_view v) { c.env.usv = parse_usv_mode(v); },
                 [](const C& c) { return format_usv_mode(c.env.usv); }});
    t.push_back(integer("run", "eval_episodes", [](C& c) -> auto& { return c.eval_episodes; }));
    t.push_back(text("run", "eval_policy", [](C& c) -> auto& { return c.eval_policy; }));
    t.push_back(text("run", "checkpoint", [](C& c) -> auto& { return c.checkpoint; }));
    t.push_back(integer("run", "log_every", [](C& c) -> auto& { return c.log_every; }));

    t.push_back(text("sweep", "sweep_param", [](C& c) -> auto& { return c.sweep_param; }));
    t.push_back({"sweep", "sweep_values", [](C& c, std::string_view v) { c.sweep_values = parse_doubles(v); },
                 [](const C& c) { return join(c.sweep_values, fmt); }});
    t.push_back(text("sweep", "sweep_mode", [](C& c) -> auto& { return c.sweep_mode; }));

    t.push_back({"plan", "auv_positions",
                 [](C& c, std::string_view v) {
                   c.auv_positions.clear();
                   for (auto p : split(v, ';')) {
                     if (p.empty()) continue;
                     const auto xy = split(p, ',');
                     if (xy.size() != 2) throw ConfigError("auv_positions expects x,y;x,y;...");
                     c.auv_positions.push_back({to_double(xy[0]), to_double(xy[1])});
                   }
                 },
                 [](const C& c) {
                   return join(c.auv_positions, [](const Point2& p) { return fmt(p.x) + "," + fmt(p.y); }, ";");
                 }});
    t.push_back(dbl("plan", "oracle_grid", [](C& c) -> auto& { return c.oracle_grid; }));
    t.push_back({"simulate", "sea_times", [](C& c, std::string_view v) { c.sea_times = parse_doubles(v); },
                 [](const C& c) { return join(c.sea_times, fmt); }});
    return t;
  }();
  return k;
}

const Key* find_key(std::string_view name) {
  for (const auto& k : keys())
    if (k.name == name) return &k;
  return nullptr;
}

void finalize(RunConfig& c) {
  const auto& m = c.env.mission;
  c.env.planner.bounds = {0.0, m.x_max, 0.0, m.y_max};
  c.env.mission.episode_steps = c.hyper.steps_per_episode;
}

}  // namespace

mission::UsvModeSpec parse_usv_mode(std::string_view text) {
  const auto t = trim(text);
  if (t == "fim") return {};
  if (t.starts_with("fixed:")) {
    const auto xy = split(t.substr(6), ',');
    if (xy.size() != 2) throw ConfigError("usv mode expects fixed:x,y");
    return {mission::UsvMode::Fixed, to_double(xy[0]), to_double(xy[1])};
  }
  throw ConfigError("usv mode must be fim or fixed:x,y, got '" + std::string(t) + "'");
}

std::string format_usv_mode(const mission::UsvModeSpec& m) {
  if (m.mode == mission::UsvMode::FimPlanned) return "fim";
  return "fixed:" + fmt(m.x) + "," + fmt(m.y);
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (auto p : split(text, ',')) {
    if (p.empty()) continue;
    const auto dash = p.find('-', 1);
    if (dash != std::string_view::npos) {
      const long long a = to_int(p.substr(0, dash)), b = to_int(p.substr(dash + 1));
      if (a < 0 || b < a) throw ConfigError("bad seed range '" + std::string(p) + "'");
      for (long long s = a; s <= b; ++s) out.push_back(static_cast<std::uint64_t>(s));
    } else {
      const long long s = to_int(p);
      if (s < 0) throw ConfigError("seeds must be non-negative");
      out.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (out.empty()) throw ConfigError("seed list is empty");
  return out;
}

void set_key(RunConfig& cfg, std::string_view key, std::string_view value) {
  const Key* k = find_key(trim(key));
  if (!k) throw ConfigError("unknown key '" + std::string(trim(key)) + "'");
  k->set(cfg, value);
  finalize(cfg);
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& k : keys()) out.push_back(k.name);
  return out;
}

void apply_profile(RunConfig& c, std::string_view name) {
  auto& m = c.env.mission;
  if (name == "paper") {
  } else if (name == "desk") {
    c.hyper.episodes = 120;
    // Plain SGD drives the actor into the walls within ~80 episodes here.
    c.hyper.optimizer = rl::OptimizerKind::Adam;
    m.n_poi = 30;
    c.env.sea.grid.dx = m.x_max / 50.0;
    c.env.sea.grid.dy = m.y_max / 50.0;
  } else if (name == "toy") {
    m.n_auv = 1;
    m.n_poi = 5;
    m.x_max = 50.0;
    m.y_max = 50.0;
    c.env.sea.enabled = false;
    c.hyper.episodes = 200;
    c.hyper.steps_per_episode = 200;
  } else {
    throw ConfigError("unknown profile '" + std::string(name) + "' (expected paper|desk|toy)");
  }
  c.profile = std::string(name);
  finalize(c);
}

void RunConfig::validate() const {
  env.mission.validate();
  env.reward.validate();
  env.usbl.validate();
  env.planner.validate();
  hyper.validate();
  const auto& m = env.mission;
  if (env.planner.bounds.x_min < 0.0 || env.planner.bounds.x_max > m.x_max ||
      env.planner.bounds.y_min < 0.0 || env.planner.bounds.y_max > m.y_max)
    throw ConfigError("planner bounds exceed the mission area");
  if (m.episode_steps != hyper.steps_per_episode)
    throw ConfigError("episode length mismatch between mission and td3");
  if (env.usv.mode == mission::UsvMode::Fixed &&
      (env.usv.x < 0.0 || env.usv.x > m.x_max || env.usv.y < 0.0 || env.usv.y > m.y_max))
    throw ConfigError("fixed USV position outside the mission area");
  const auto& g = env.sea.grid;
  if (!(g.dx > 0.0) || !(g.dy > 0.0) || !(g.dt_sub > 0.0) || !(g.depth_h > 0.0) || !(g.g > 0.0))
    throw ConfigError("wave grid parameters must be > 0");
  if (env.sea.enabled && g.dt_sub > sea::WaveGrid::cfl_limit(g))
    throw ConfigError("dt_sub " + fmt(g.dt_sub) + " violates the CFL limit " +
                      fmt(sea::WaveGrid::cfl_limit(g)));
  if (env.sea.vortices.gamma_min > env.sea.vortices.gamma_max ||
      env.sea.vortices.delta_min > env.sea.vortices.delta_max || !(env.sea.vortices.delta_min > 0.0) ||
      !(env.sea.vortices.quadrant > 0.0))
    throw ConfigError("vortex placement ranges are inconsistent");
  if (seeds.empty()) throw ConfigError("seed list is empty");
  if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
  if (eval_policy != "checkpoint" && eval_policy != "scripted" && eval_policy != "random")
    throw ConfigError("eval_policy must be checkpoint|scripted|random");
  if (log_every < 0) throw ConfigError("log_every must be >= 0");
  if (sweep_mode != "train" && sweep_mode != "eval") throw ConfigError("sweep_mode must be train|eval");
  if (!sweep_param.empty() && !find_key(sweep_param))
    throw ConfigError("sweep_param '" + sweep_param + "' is not a config key");
  if (oracle_grid < 0.0) throw ConfigError("oracle_grid must be >= 0");
  for (double t : sea_times)
    if (t < 0.0) throw ConfigError("sea_times must be >= 0");
}

RunConfig parse_config_text(std::string_view text, std::string_view origin) {
  RunConfig cfg;
  std::string section;
  std::vector<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  std::string profile_line;
  std::vector<std::pair<int, std::pair<std::string, std::string>>> assignments;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto where = [&] { return std::string(origin) + ":" + std::to_string(line_no) + ": "; };
    // ';' only comments out whole lines: it separates points in auv_positions.
    if (const auto c = line.find('#'); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (!line.empty() && line.front() == ';') continue;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::vector<std::string> sections{"mission", "reward", "sea", "usbl", "planner",
                                                     "td3", "run", "sweep", "plan", "simulate"};
      if (std::find(sections.begin(), sections.end(), section) == sections.end())
        throw ConfigError(where() + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const Key* k = find_key(key);
    if (!k) throw ConfigError(where() + "unknown key '" + key + "'");
    if (!section.empty() && k->section != section)
      throw ConfigError(where() + "key '" + key + "' belongs to [" + k->section + "], not [" + section + "]");
    if (std::find(seen.begin(), seen.end(), key) != seen.end())
      throw ConfigError(where() + "duplicate key '" + key + "'");
    seen.push_back(key);
    assignments.push_back({line_no, {key, value}});
  }
  const auto build = [&](std::size_t skip) {
    RunConfig c = cfg;
    // The profile is a preset: apply it first so explicit keys override it.
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      const auto& [ln, kv] = assignments[i];
      if (kv.first != "profile" || i == skip) continue;
      try {
        apply_profile(c, kv.second);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string(origin) + ":" + std::to_string(ln) + ": " + e.what());
      }
    }
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      const auto& [ln, kv] = assignments[i];
      if (kv.first == "profile" || i == skip) continue;
      try {
        set_key(c, kv.first, kv.second);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string(origin) + ":" + std::to_string(ln) + ": " + kv.first + ": " + e.what());
      }
    }
    finalize(c);
    return c;
  };
  RunConfig out = build(assignments.size());
  try {
    out.validate();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    // Blame the last line whose removal changes the verdict.
    for (std::size_t i = assignments.size(); i-- > 0;) {
      std::string alt;
      try {
        build(i).validate();
      } catch (const ConfigError& e2) {
        alt = e2.what();
      }
      if (alt != msg)
        throw ConfigError(std::string(origin) + ":" + std::to_string(assignments[i].first) + ": " +
                          assignments[i].second.first + ": " + msg);
    }
    throw ConfigError(std::string(origin) + ": " + msg);
  }
  return out;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

std::string resolved_text(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    // Where outputs go is not part of what is run.
    if (k.name == "profile" || k.name == "output_dir") continue;
    if (k.section != section) {
      section = k.section;
      out += (out.empty() ? "[" : "\n[") + section + "]\n";
    }
    out += k.name + " = " + k.get(cfg) + "\n";
  }
  return out;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : resolved_text(cfg)) h = (h ^ c) * 1099511628211ULL;
  return h;
}

}  // namespace usvauv::harness
