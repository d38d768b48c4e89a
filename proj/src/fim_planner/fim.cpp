#include <cmath>
#include <numbers>
#include <string>

#include "usvauv/errors.hpp"
#include "usvauv/fim_planner.hpp"

namespace usvauv::fim {

std::pair<double, double> FimMatrix::eigenvalues() const {
  const double mean = 0.5 * (j11 + j22);
  const double half = 0.5 * (j11 - j22);
  const double rad = std::sqrt(half * half + j12 * j12);
  return {mean - rad, mean + rad};
}

Jacobian phase_jacobian(const UsvState& usv, const AuvTruth& auv, const UsblConfig& cfg) {
  const double dx = auv.x - usv.x;
  const double dy = auv.y - usv.y;
  const double z = usbl::effective_depth(usv, auv);
  const double s2 = dx * dx + dy * dy + z * z;
  if (!(s2 > 0.0)) throw DegenerateGeometry("slant range is zero");
  const double s = std::sqrt(s2);
  const double k = cfg.phase_gain() / (s2 * s);
  // dphi_x = K dx / S with dx = x_k - x; d/dx picks up -1 from dx and -dx/S from S.
  return {-k * (dy * dy + z * z), k * dx * dy, k * dx * dy, -k * (dx * dx + z * z)};
}

FimMatrix fim(const UsvState& usv, std::span<const AuvTruth> auvs,
              std::span<const UsblConfig> cfgs) {
  if (auvs.empty()) throw DomainError("FIM needs at least one AUV");
  if (cfgs.size() != auvs.size()) throw ConfigError("one USBL config per AUV required");
  FimMatrix j;
  for (std::size_t k = 0; k < auvs.size(); ++k) {
    const double sigma = cfgs[k].sigma_phase;
    if (!(sigma > 0.0)) throw ConfigError("FIM requires sigma_phase > 0");
    Jacobian h;
    try {
      h = phase_jacobian(usv, auvs[k], cfgs[k]);
    } catch (const DegenerateGeometry&) {
      throw DegenerateGeometry("AUV " + std::to_string(k) + " coincides with the USV",
                               static_cast<int>(k));
    }
    const double w = 1.0 / (sigma * sigma);
    j.j11 += w * (h.h11 * h.h11 + h.h21 * h.h21);
    j.j12 += w * (h.h11 * h.h12 + h.h21 * h.h22);
    j.j22 += w * (h.h12 * h.h12 + h.h22 * h.h22);
  }
  j.det = j.j11 * j.j22 - j.j12 * j.j12;
  return j;
}

FimMatrix fim(const UsvState& usv, std::span<const AuvTruth> auvs, const UsblConfig& cfg) {
  std::vector<UsblConfig> cfgs(auvs.size(), cfg);
  return fim(usv, auvs, cfgs);
}

double det_fim(const UsvState& usv, std::span<const AuvTruth> auvs,
               std::span<const UsblConfig> cfgs) {
  return fim(usv, auvs, cfgs).det;
}

double det_fim(const UsvState& usv, std::span<const AuvTruth> auvs, const UsblConfig& cfg) {
  return fim(usv, auvs, cfg).det;
}

std::vector<GeometryTerms> geometry_terms(const UsvState& usv, std::span<const AuvTruth> auvs) {
  std::vector<GeometryTerms> out;
  out.reserve(auvs.size());
  for (const auto& a : auvs) {
    const double dx = a.x - usv.x, dy = a.y - usv.y;
    const double z = usbl::effective_depth(usv, a);
    GeometryTerms t;
    t.p = std::hypot(dx, dy);
    t.slant = std::sqrt(t.p * t.p + z * z);
    t.gamma = std::asin(z / t.slant);
    t.phi = std::atan2(dy, dx);
    const double p2 = t.p * t.p, s2 = t.slant * t.slant;
    t.a = (p2 * p2 - 2.0 * s2 * p2) / (2.0 * s2 * s2 * s2);
    out.push_back(t);
  }
  return out;
}

double angular_diversity(std::span<const GeometryTerms> terms) {
  double chi = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      const double s = std::sin(terms[i].phi - terms[j].phi);
      chi += s * s;
    }
  return chi;
}

void SymmetricCase::validate() const {
  if (m < 1) throw ConfigError("symmetric case needs m >= 1");
  if (!(s0 > 0.0)) throw ConfigError("symmetric case needs S0 > 0");
  const double chi_max = 0.5 * m * (m - 1);
  if (!(chi >= 0.0 && chi <= chi_max + 1e-12))
    throw ConfigError("chi outside [0, m(m-1)/2]");
}

double det_symmetric(const SymmetricCase& c, const UsblConfig& cfg) {
  c.validate();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double f = cfg.freq, d = cfg.spacing_d, sc = cfg.sound_speed_c, sg = cfg.sigma_phase;
  const double lead = 4.0 * pi2 * f * f * d * d / (sg * sg * sc * sc);
  const double sg0 = std::sin(c.gamma0);
  const double s2 = sg0 * sg0, s4 = s2 * s2;
  const double s04 = c.s0 * c.s0 * c.s0 * c.s0;
  return lead * lead * (3.0 * c.m * s2 / s04 + (s4 + 1.0) * (s4 + 1.0) / s04 * c.chi);
}

namespace {

double det_symmetric_at_radius(double r, double z, int m, double chi, const UsblConfig& cfg) {
  const double s0 = std::sqrt(r * r + z * z);
  return det_symmetric({s0, std::asin(z / s0), m, chi}, cfg);
}

}  // namespace

double optimal_radius(double depth_z, int m, double chi, const UsblConfig& cfg, double r_min,
                      double r_max) {
  if (!(r_min >= 0.0 && r_min < r_max)) throw ConfigError("need 0 <= r_min < r_max");
  if (!(depth_z > 0.0)) throw ConfigError("depth must be > 0");
  const auto f = [&](double r) { return det_symmetric_at_radius(r, depth_z, m, chi, cfg); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = r_min, b = r_max;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-3) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double best = 0.5 * (a + b);
  double fbest = f(best);
  for (double r : {r_min, r_max}) {
    const double fr = f(r);
    if (fr > fbest || (fr == fbest && r == r_min)) {
      best = r;
      fbest = fr;
    }
  }
  return best;
}

}  // namespace usvauv::fim
