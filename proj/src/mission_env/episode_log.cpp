#include <cstdio>

#include "json.hpp"

#include "usvauv/mission_io.hpp"

namespace usvauv::mission {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string metrics_csv_header() {
  return "episode,seed,sdr_mbps,ec_w,arpt,ssn,traj_len_auv1,traj_len_auv2,traj_len_auv3,"
         "traj_len_auv4,pos_err_mean_m,violations";
}

void write_metrics_row(std::ostream& os, int episode, std::uint64_t seed, const EpisodeMetrics& m) {
  os << episode << ',' << seed << ',' << num(m.sdr) << ',' << num(m.ec) << ',' << num(m.arpt) << ','
     << m.ssn;
  for (std::size_t k = 0; k < 4; ++k) {
    os << ',';
    if (k < m.traj_lens.size()) os << num(m.traj_lens[k]);
  }
  os << ',' << num(m.pos_error_mean) << ',' << m.violations << '\n';
}

void write_episode_jsonl(std::ostream& os, int episode, const EpisodeLog& log) {
  for (const auto& s : log.steps) {
    nlohmann::ordered_json j;
    j["episode"] = episode;
    j["seed"] = log.seed;
    j["step"] = s.step;
    j["t"] = s.t;
    j["usv"] = {s.usv_x, s.usv_y, s.usv_eta};
    j["fim_det"] = s.fim_det;
    j["n_do"] = s.n_do;
    j["violations"] = s.violations;
    auto& auvs = j["auvs"] = nlohmann::ordered_json::array();
    for (const auto& a : s.auvs) {
      nlohmann::ordered_json r;
      r["pos"] = {a.x, a.y};
      r["action"] = {a.v_norm, a.theta_norm};
      r["speed"] = a.speed;
      r["heading"] = a.heading;
      r["target"] = a.target_id;
      r["border"] = a.border;
      r["transmitted"] = a.transmitted;
      r["transfer_bits"] = a.transfer_bits;
      r["pos_err"] = a.pos_error;
      r["power"] = a.power;
      r["terms"] = {{"dist", a.terms.dist},     {"overflow", a.terms.overflow},
                    {"tl", a.terms.tl},         {"energy", a.terms.energy},
                    {"safety", a.terms.safety}, {"border", a.terms.border}};
      r["reward"] = a.terms.total();
      auvs.push_back(std::move(r));
    }
    os << j.dump() << '\n';
  }
}

}  // namespace usvauv::mission
