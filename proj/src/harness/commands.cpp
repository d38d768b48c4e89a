#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "usvauv/errors.hpp"
#include "usvauv/harness/commands.hpp"
#include "usvauv/harness/rollout.hpp"
#include "usvauv/harness/stats.hpp"
#include "usvauv/mission_io.hpp"
#include "usvauv/rl/checkpoint.hpp"

namespace usvauv::harness {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream o(p, std::ios::binary | std::ios::trunc);
  if (!o) throw SimulationFault("cannot write " + p.string());
  o << s;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream o(p, std::ios::binary | std::ios::trunc);
  if (!o) throw SimulationFault("cannot write " + p.string());
  return o;
}

json mean_std_json(std::span<const double> v) {
  const MeanStd m = mean_std(v);
  return json{{"mean", m.mean}, {"std", m.std}, {"n", m.n}};
}

fs::path prepare_run_dir(const RunConfig& cfg, std::uint64_t seed) {
  const fs::path dir = fs::path(cfg.output_dir) / run_id(cfg, seed);
  fs::create_directories(dir);
  write_file(dir / "config.resolved", resolved_text(cfg));
  return dir;
}

bool log_episode(const RunConfig& cfg, int ep, int total) {
  return cfg.log_every > 0 && (ep % cfg.log_every == 0 || ep == total - 1);
}

template <class F>
std::vector<double> column(const std::vector<mission::EpisodeMetrics>& ms, F f) {
  std::vector<double> out;
  for (const auto& m : ms) out.push_back(f(m));
  return out;
}

json metrics_summary(const std::vector<mission::EpisodeMetrics>& ms) {
  json j;
  j["sdr_mbps"] = mean_std_json(column(ms, [](const auto& m) { return m.sdr; }));
  j["ec_w"] = mean_std_json(column(ms, [](const auto& m) { return m.ec; }));
  j["arpt"] = mean_std_json(column(ms, [](const auto& m) { return m.arpt; }));
  j["ssn"] = mean_std_json(column(ms, [](const auto& m) { return static_cast<double>(m.ssn); }));
  j["pos_err_mean_m"] = mean_std_json(column(ms, [](const auto& m) { return m.pos_error_mean; }));
  j["violations"] = mean_std_json(column(ms, [](const auto& m) { return static_cast<double>(m.violations); }));
  for (std::size_t k = 0; k < (ms.empty() ? 0 : ms.front().traj_lens.size()); ++k)
    j["traj_len_auv" + std::to_string(k + 1)] =
        mean_std_json(column(ms, [k](const auto& m) { return m.traj_lens[k]; }));
  return j;
}

std::shared_ptr<rl::Td3Agent> make_agent(const RunConfig& cfg, std::uint64_t seed) {
  return std::make_shared<rl::Td3Agent>(cfg.env.mission.state_dim(), 2, cfg.hyper, seed);
}

int cmd_train(const RunConfig& cfg, bool quiet, std::ostream& out) {
  std::vector<mission::EpisodeMetrics> finals;
  json runs = json::array();
  for (std::uint64_t seed : cfg.seeds) {
    try {
      const TrainRun r = train_seed(cfg, seed, quiet ? nullptr : &out);
      const auto& ms = r.result.metrics;
      const std::size_t tail = std::min<std::size_t>(20, ms.size());
      finals.insert(finals.end(), ms.end() - static_cast<long>(tail), ms.end());
      runs.push_back({{"seed", seed}, {"dir", r.dir.filename().string()}, {"converged", r.result.converged},
                      {"converged_episode", r.result.converged_episode}});
      out << "seed " << seed << " -> " << r.dir.string() << (r.result.converged ? " (converged)" : "")
          << '\n';
    } catch (const RuntimeFault& e) {
      throw TrainingFault("seed " + std::to_string(seed) + ": " + e.what());
    }
  }
  json s;
  s["command"] = "train";
  s["seeds"] = cfg.seeds;
  s["runs"] = runs;
  s["final_20_episodes"] = metrics_summary(finals);
  write_file(fs::path(cfg.output_dir) / "train_summary.json", s.dump(2) + "\n");
  return 0;
}

json eval_mode_block(const RunConfig& cfg, std::ostream& out, std::vector<double>* pos_errors) {
  std::vector<mission::EpisodeMetrics> all;
  std::vector<double> dets;
  json runs = json::array();
  for (std::uint64_t seed : cfg.seeds) {
    try {
      const EvalRun r = eval_seed(cfg, seed);
      all.insert(all.end(), r.episodes.begin(), r.episodes.end());
      dets.push_back(r.fim_det_mean);
      runs.push_back(r.dir.filename().string());
    } catch (const RuntimeFault& e) {
      throw SimulationFault("seed " + std::to_string(seed) + ": " + e.what());
    }
  }
  const std::string mode = format_usv_mode(cfg.env.usv);
  json j;
  j["usv_mode"] = mode;
  j["policy"] = cfg.eval_policy;
  j["episodes_per_seed"] = cfg.eval_episodes;
  j["runs"] = runs;
  j["metrics"] = metrics_summary(all);
  j["fim_det"] = mean_std_json(dets);
  if (pos_errors) *pos_errors = column(all, [](const auto& m) { return m.pos_error_mean; });
  out << mode << ": pos_err "
      << format_mean_std(mean_std(column(all, [](const auto& m) { return m.pos_error_mean; })), 3)
      << " m, sdr " << format_mean_std(mean_std(column(all, [](const auto& m) { return m.sdr; })), 4)
      << " Mbps, ssn "
      << format_mean_std(mean_std(column(all, [](const auto& m) { return static_cast<double>(m.ssn); })))
      << '\n';
  return j;
}

int cmd_eval(const RunConfig& base, const std::vector<mission::UsvModeSpec>& modes, std::ostream& out) {
  json blocks = json::array();
  std::ostringstream csv;
  csv << "usv_mode,n,pos_err_mean_m,pos_err_std_m,sdr_mbps,ec_w,arpt,ssn,violations\n";
  for (const auto& mode : modes) {
    RunConfig cfg = base;
    cfg.env.usv = mode;
    cfg.validate();
    blocks.push_back(eval_mode_block(cfg, out, nullptr));
    const auto& m = blocks.back()["metrics"];
    csv << format_usv_mode(mode) << ',' << m["pos_err_mean_m"]["n"].get<int>() << ','
        << fmt(m["pos_err_mean_m"]["mean"].get<double>()) << ',' << fmt(m["pos_err_mean_m"]["std"].get<double>())
        << ',' << fmt(m["sdr_mbps"]["mean"].get<double>()) << ',' << fmt(m["ec_w"]["mean"].get<double>()) << ','
        << fmt(m["arpt"]["mean"].get<double>()) << ',' << fmt(m["ssn"]["mean"].get<double>()) << ','
        << fmt(m["violations"]["mean"].get<double>()) << '\n';
  }
  json s;
  s["command"] = "eval";
  s["seeds"] = base.seeds;
  s["modes"] = blocks;
  fs::create_directories(base.output_dir);
  write_file(fs::path(base.output_dir) / "eval_summary.json", s.dump(2) + "\n");
  write_file(fs::path(base.output_dir) / "eval_summary.csv", csv.str());
  return 0;
}

int cmd_plan(const RunConfig& cfg, std::ostream& out) {
  if (cfg.auv_positions.empty()) throw ConfigError("plan needs at least one AUV position");
  std::vector<usbl::AuvTruth> auvs;
  for (const auto& p : cfg.auv_positions) {
    if (p.x < 0.0 || p.x > cfg.env.mission.x_max || p.y < 0.0 || p.y > cfg.env.mission.y_max)
      throw ConfigError("AUV position (" + fmt(p.x) + ", " + fmt(p.y) + ") outside the mission area");
    auvs.push_back({p.x, p.y, cfg.env.mission.auv_depth});
  }
  const auto cfgs = usbl::per_auv_configs(cfg.env.usbl, static_cast<int>(auvs.size()));
  fim::PlannerConfig plan = cfg.env.planner;
  plan.seed = cfg.seeds.front() + cfg.env.planner.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const fim::Waypoint w = fim::plan_waypoint(auvs, cfgs, plan);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  json j;
  j["auvs"] = json::array();
  for (const auto& a : auvs) j["auvs"].push_back({a.x, a.y, a.z});
  j["waypoint"] = {w.x, w.y};
  j["det"] = w.det;
  j["nit"] = plan.nit;
  j["pop_size"] = plan.pop_size;
  j["evaluations"] = w.evaluations;
  j["degenerate"] = w.degenerate;
  json timing;
  timing["runtime_ms"] = ms;
  if (cfg.oracle_grid > 0.0) {
    const auto t1 = std::chrono::steady_clock::now();
    const fim::Waypoint g = fim::grid_search(auvs, cfgs, plan.bounds, cfg.oracle_grid, 0.0, plan.standoff_r_min);
    const double gms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t1).count();
    j["oracle"] = {{"step_m", cfg.oracle_grid}, {"waypoint", {g.x, g.y}}, {"det", g.det},
                   {"ratio", g.det > 0.0 ? w.det / g.det : 1.0}};
    timing["oracle_runtime_ms"] = gms;
  }
  // Wall-clock numbers go to their own file so plan.json is reproducible.
  const std::string doc = j.dump(2) + "\n";
  out << doc << timing.dump() << '\n';
  fs::create_directories(cfg.output_dir);
  write_file(fs::path(cfg.output_dir) / "plan.json", doc);
  write_file(fs::path(cfg.output_dir) / "plan_timing.json", timing.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const RunConfig& base, std::ostream& out) {
  if (base.sweep_param.empty() || base.sweep_values.empty())
    throw ConfigError("sweep needs sweep_param and a non-empty sweep_values list");
  std::ostringstream csv;
  csv << "param,value,seed,sdr_mbps,ec_w,arpt,ssn,pos_err_mean_m,violations,fim_det_mean\n";
  std::vector<double> xs, sdr, ec, arpt, ssn, err, viol, det;
  json points = json::array();
  for (double v : base.sweep_values) {
    RunConfig cfg = base;
    set_key(cfg, cfg.sweep_param, fmt(v));
    cfg.validate();
    std::vector<mission::EpisodeMetrics> point;
    std::vector<double> point_det;
    for (std::uint64_t seed : cfg.seeds) {
      std::vector<mission::EpisodeMetrics> ms;
      double d = 0.0;
      if (cfg.sweep_mode == "train") {
        const TrainRun r = train_seed(cfg, seed, nullptr);
        const auto& all = r.result.metrics;
        ms.assign(all.end() - static_cast<long>(std::min<std::size_t>(20, all.size())), all.end());
      } else {
        const EvalRun r = eval_seed(cfg, seed);
        ms = r.episodes;
        d = r.fim_det_mean;
      }
      const auto mean = [&](auto f) {
        double s = 0.0;
        for (const auto& m : ms) s += f(m);
        return s / static_cast<double>(ms.size());
      };
      const double row[] = {mean([](const auto& m) { return m.sdr; }), mean([](const auto& m) { return m.ec; }),
                            mean([](const auto& m) { return m.arpt; }),
                            mean([](const auto& m) { return static_cast<double>(m.ssn); }),
                            mean([](const auto& m) { return m.pos_error_mean; }),
                            mean([](const auto& m) { return static_cast<double>(m.violations); }), d};
      csv << cfg.sweep_param << ',' << fmt(v) << ',' << seed;
      for (double x : row) csv << ',' << fmt(x);
      csv << '\n';
      xs.push_back(v);
      sdr.push_back(row[0]);
      ec.push_back(row[1]);
      arpt.push_back(row[2]);
      ssn.push_back(row[3]);
      err.push_back(row[4]);
      viol.push_back(row[5]);
      det.push_back(row[6]);
      point.insert(point.end(), ms.begin(), ms.end());
      point_det.push_back(d);
    }
    json p;
    p["value"] = v;
    p["metrics"] = metrics_summary(point);
    p["fim_det"] = mean_std_json(point_det);
    points.push_back(p);
    out << cfg.sweep_param << " = " << fmt(v) << " done\n";
  }
  json s;
  s["command"] = "sweep";
  s["param"] = base.sweep_param;
  s["mode"] = base.sweep_mode;
  s["seeds"] = base.seeds;
  s["points"] = points;
  s["spearman"] = {{"sdr_mbps", spearman(xs, sdr)}, {"ec_w", spearman(xs, ec)},
                   {"arpt", spearman(xs, arpt)},    {"ssn", spearman(xs, ssn)},
                   {"pos_err_mean_m", spearman(xs, err)}, {"violations", spearman(xs, viol)},
                   {"fim_det_mean", spearman(xs, det)}};
  fs::create_directories(base.output_dir);
  write_file(fs::path(base.output_dir) / "sweep.csv", csv.str());
  write_file(fs::path(base.output_dir) / "sweep.json", s.dump(2) + "\n");
  out << s["spearman"].dump() << '\n';
  return 0;
}

void dump_field(const fs::path& p, const sea::SeaState& sea, int which) {
  const auto& g = sea.grid();
  std::ostringstream o;
  for (std::size_t i = 0; i < g.nx(); ++i) o << (i ? "," : "") << fmt(static_cast<double>(i) * g.dx());
  o << '\n';
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const sea::SeaSample s = sea.sample(static_cast<double>(i) * g.dx(), static_cast<double>(j) * g.dy());
      const double v = which == 0 ? s.eta : which == 1 ? s.wave_u
                                        : which == 2 ? s.wave_v
                                                     : s.vorticity;
      o << (i ? "," : "") << fmt(v);
    }
    o << '\n';
  }
  write_file(p, o.str());
}

int cmd_simulate_sea(const RunConfig& cfg, std::ostream& out) {
  if (cfg.sea_times.empty()) throw ConfigError("simulate-sea needs at least one time");
  std::vector<double> times = cfg.sea_times;
  std::sort(times.begin(), times.end());
  sea::SeaConfig sc = cfg.env.sea;
  sc.enabled = true;
  std::mt19937_64 rng(cfg.seeds.front());
  sea::SeaState sea(sc, cfg.env.mission.x_max, cfg.env.mission.y_max, rng);
  const fs::path dir = fs::path(cfg.output_dir) / ("sea-" + run_id(cfg, cfg.seeds.front()));
  fs::create_directories(dir);
  write_file(dir / "config.resolved", resolved_text(cfg));
  std::ostringstream diag;
  diag << "t,sum_eta,max_abs_eta\n";
  static const char* names[] = {"eta", "u", "v", "vorticity"};
  for (double t : times) {
    sea.advance_to(t);
    char tag[32];
    std::snprintf(tag, sizeof tag, "t%g", t);
    for (int f = 0; f < 4; ++f) dump_field(dir / (std::string("sea_") + tag + "_" + names[f] + ".csv"), sea, f);
    double sum = 0.0, peak = 0.0;
    for (double e : sea.grid().eta()) {
      sum += e;
      peak = std::max(peak, std::abs(e));
    }
    diag << fmt(sea.t()) << ',' << fmt(sum) << ',' << fmt(peak) << '\n';
    out << "t = " << sea.t() << " s: sum(eta) = " << sum << ", max|eta| = " << peak << '\n';
  }
  write_file(dir / "conservation.csv", diag.str());
  return 0;
}

}  // namespace

std::string run_id(const RunConfig& cfg, std::uint64_t seed) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "seed%llu-%016llx", static_cast<unsigned long long>(seed),
                static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

TrainRun train_seed(const RunConfig& cfg, std::uint64_t seed, std::ostream* progress) {
  TrainRun run;
  run.dir = prepare_run_dir(cfg, seed);
  const auto t0 = std::chrono::steady_clock::now();
  mission::MissionEnv env(cfg.env);
  run.agent = make_agent(cfg, seed);
  auto metrics_csv = open_out(run.dir / "metrics.csv");
  metrics_csv << mission::metrics_csv_header() << '\n';
  auto jsonl = open_out(run.dir / "episodes.jsonl");
  rl::TrainOptions opt;
  opt.seed = seed;
  opt.rule = cfg.convergence;
  opt.progress = progress;
  opt.on_episode = [&](int ep, const mission::EpisodeLog& log, const mission::EpisodeMetrics& m) {
    mission::write_metrics_row(metrics_csv, ep, log.seed, m);
    if (log_episode(cfg, ep, cfg.hyper.episodes)) mission::write_episode_jsonl(jsonl, ep, log);
  };
  run.result = rl::train(env, *run.agent, opt);
  {
    auto curves = open_out(run.dir / "curves.csv");
    curves << rl::curves_csv_header() << '\n';
    for (const auto& row : run.result.curves) rl::write_curve_row(curves, row);
  }
  rl::save_checkpoint(run.dir / "checkpoint.bin", *run.agent);

  const auto& r = run.result;
  const std::size_t tail = std::min<std::size_t>(20, r.metrics.size());
  json rep;
  rep["command"] = "train";
  rep["run_id"] = run.dir.filename().string();
  rep["seed"] = seed;
  rep["episodes"] = cfg.hyper.episodes;
  rep["steps_per_episode"] = cfg.hyper.steps_per_episode;
  rep["n_auv"] = cfg.env.mission.n_auv;
  rep["state_dim"] = cfg.env.mission.state_dim();
  rep["env_steps"] = r.env_steps;
  rep["critic_updates"] = r.critic_updates;
  rep["actor_updates"] = r.actor_updates;
  rep["max_buffer_size"] = r.max_buffer_size;
  rep["target_diagnostics"] = {{"samples", r.diagnostics.samples},
                               {"min_bound_violations", r.diagnostics.min_bound_violations},
                               {"clip_violations", r.diagnostics.clip_violations},
                               {"max_abs_perturbation", r.diagnostics.max_abs_perturbation}};
  rep["convergence"] = {{"window", cfg.convergence.window},
                        {"slope_threshold", cfg.convergence.slope_threshold},
                        {"run_length", cfg.convergence.run_length},
                        {"metrics", {"arpt", "sdr_mbps", "ec_w"}},
                        {"converged", r.converged},
                        {"converged_episode", r.converged_episode}};
  rep["final_20_episodes"] = metrics_summary(
      std::vector<mission::EpisodeMetrics>(r.metrics.end() - static_cast<long>(tail), r.metrics.end()));
  write_file(run.dir / "report.json", rep.dump(2) + "\n");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file(run.dir / "timing.json", json{{"wall_s", secs}}.dump(2) + "\n");
  return run;
}

EvalRun eval_seed(const RunConfig& cfg, std::uint64_t seed) {
  EvalRun run;
  run.dir = prepare_run_dir(cfg, seed);
  mission::MissionEnv env(cfg.env);
  Policy policy;
  if (cfg.eval_policy == "checkpoint") {
    if (cfg.checkpoint.empty()) throw ConfigError("eval with eval_policy = checkpoint needs --checkpoint");
    auto agent = make_agent(cfg, seed);
    rl::load_checkpoint(cfg.checkpoint, *agent);
    policy = actor_policy(agent);
  } else if (cfg.eval_policy == "scripted") {
    policy = scripted_patrol();
  } else {
    policy = random_policy(eval_episode_seed(seed, -1));
  }
  auto metrics_csv = open_out(run.dir / "metrics.csv");
  metrics_csv << mission::metrics_csv_header() << '\n';
  auto jsonl = open_out(run.dir / "episodes.jsonl");
  auto poserr = open_out(run.dir / "poserr.csv");
  poserr << "episode,t,auv_id,error_m,mode\n";
  const std::string mode = format_usv_mode(cfg.env.usv);
  double det_sum = 0.0, err_sum = 0.0;
  long det_n = 0;
  for (int ep = 0; ep < cfg.eval_episodes; ++ep) {
    const auto m = run_episode(env, policy, eval_episode_seed(seed, ep));
    mission::write_metrics_row(metrics_csv, ep, env.log().seed, m);
    if (log_episode(cfg, ep, cfg.eval_episodes)) mission::write_episode_jsonl(jsonl, ep, env.log());
    for (const auto& s : env.log().steps) {
      det_sum += s.fim_det;
      ++det_n;
      for (std::size_t k = 0; k < s.auvs.size(); ++k)
        poserr << ep << ',' << fmt(s.t) << ',' << k + 1 << ',' << fmt(s.auvs[k].pos_error) << ',' << mode << '\n';
    }
    err_sum += m.pos_error_mean;
    run.episodes.push_back(m);
  }
  run.pos_error_mean = err_sum / cfg.eval_episodes;
  run.fim_det_mean = det_n ? det_sum / static_cast<double>(det_n) : 0.0;
  json rep;
  rep["command"] = "eval";
  rep["run_id"] = run.dir.filename().string();
  rep["seed"] = seed;
  rep["usv_mode"] = mode;
  rep["policy"] = cfg.eval_policy;
  rep["episodes"] = cfg.eval_episodes;
  rep["metrics"] = metrics_summary(run.episodes);
  rep["fim_det_mean"] = run.fim_det_mean;
  write_file(run.dir / "report.json", rep.dump(2) + "\n");
  return run;
}

RunConfig load_config(const CommandLine& cl) {
  RunConfig cfg = cl.config_path.empty() ? RunConfig{} : parse_config_file(cl.config_path);
  if (cl.profile) apply_profile(cfg, *cl.profile);
  if (cl.seeds) cfg.seeds = parse_seed_list(*cl.seeds);
  if (cl.out) cfg.output_dir = *cl.out;
  if (cl.usv_modes.size() == 1) cfg.env.usv = parse_usv_mode(cl.usv_modes.front());
  if (cl.oracle_grid) cfg.oracle_grid = *cl.oracle_grid;
  if (cl.checkpoint) cfg.checkpoint = *cl.checkpoint;
  for (const auto& s : cl.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    set_key(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

int run_command(const CommandLine& cl, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = load_config(cl);
    static const char* known[] = {"train", "eval", "plan", "sweep", "simulate-sea"};
    if (std::find(std::begin(known), std::end(known), cl.command) == std::end(known))
      throw ConfigError("unknown subcommand '" + cl.command + "'");
    // Echo for re-running this invocation: --config <out>/<command>.config.resolved
    fs::create_directories(cfg.output_dir);
    write_file(fs::path(cfg.output_dir) / (cl.command + ".config.resolved"), resolved_text(cfg));
    if (cl.command == "train") return cmd_train(cfg, cl.quiet, out);
    if (cl.command == "eval") {
      std::vector<mission::UsvModeSpec> modes;
      for (const auto& m : cl.usv_modes) modes.push_back(parse_usv_mode(m));
      if (modes.empty()) modes.push_back(cfg.env.usv);
      return cmd_eval(cfg, modes, out);
    }
    if (cl.command == "plan") return cmd_plan(cfg, out);
    if (cl.command == "sweep") return cmd_sweep(cfg, out);
    if (cl.command == "simulate-sea") return cmd_simulate_sea(cfg, out);
    throw ConfigError("unknown subcommand '" + cl.command + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "runtime fault: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace usvauv::harness
