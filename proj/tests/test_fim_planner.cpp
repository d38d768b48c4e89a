#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "usvauv/errors.hpp"
#include "usvauv/fim_planner.hpp"

using namespace usvauv;
using usvauv::fim::AuvTruth;
using usvauv::fim::Bounds;
using usvauv::fim::PlannerConfig;
using usvauv::fim::UsblConfig;
using usvauv::fim::UsvState;
using namespace usvauv::fim;

namespace {

constexpr double kPi = std::numbers::pi;

double gain(const UsblConfig& c) { return 2.0 * kPi * c.freq * c.spacing_d / c.sound_speed_c; }

// Closed form for m equal-slant, equal-depth AUVs sharing one carrier, worked
// out by hand from H^T H summed over azimuths.
double symmetric_oracle(const UsblConfig& c, int m, double s0, double gamma0, double chi) {
  const double k = gain(c);
  const double lead = k * k / (c.sigma_phase * c.sigma_phase * s0 * s0);
  const double s4 = std::pow(std::sin(gamma0), 4);
  return lead * lead * (m * m * s4 + (1.0 - s4) * (1.0 - s4) * chi);
}

std::vector<AuvTruth> ring(double r, double z, const std::vector<double>& phis, double cx = 0.0,
                           double cy = 0.0) {
  std::vector<AuvTruth> out;
  for (double p : phis) out.push_back({cx + r * std::cos(p), cy + r * std::sin(p), z});
  return out;
}

// Two azimuths whose separation gives sin^2(alpha) = chi.
std::vector<double> pair_for_chi(double chi) { return {0.3, 0.3 + std::asin(std::sqrt(chi))}; }

std::vector<AuvTruth> random_auvs(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> xy(-150.0, 150.0), z(10.0, 150.0);
  std::vector<AuvTruth> a;
  for (int i = 0; i < n; ++i) a.push_back({xy(rng), xy(rng), z(rng)});
  return a;
}

}  // namespace

TEST(Fim, DirectlyBelowIsDiagonal) {
  UsblConfig c;
  const double z = 120.0;
  const AuvTruth a{5.0, 5.0, z};
  const auto h = phase_jacobian({5.0, 5.0, 0.0}, a, c);
  EXPECT_NEAR(h.h11, -gain(c) / z, 1e-15);
  EXPECT_NEAR(h.h22, -gain(c) / z, 1e-15);
  EXPECT_EQ(h.h12, 0.0);
  EXPECT_EQ(h.h21, 0.0);
  const std::vector<AuvTruth> one{a};
  const auto j = fim::fim({5.0, 5.0, 0.0}, one, c);
  const double e = gain(c) * gain(c) / (z * z * c.sigma_phase * c.sigma_phase);
  EXPECT_NEAR(j.det, e * e, 1e-12 * e * e);
  EXPECT_GT(j.det, 0.0);
}

TEST(Fim, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-120.0, 120.0), z(20.0, 150.0), eta(-2.0, 2.0);
  UsblConfig c;
  const double h = 1e-4;
  for (int trial = 0; trial < 100; ++trial) {
    const UsvState usv{u(rng), u(rng), eta(rng)};
    const AuvTruth auv{u(rng), u(rng), z(rng)};
    const auto jac = phase_jacobian(usv, auv, c);
    auto at = [&](double dx, double dy) {
      return usbl::true_phases({usv.x + dx, usv.y + dy, usv.eta}, auv, c);
    };
    const auto xp = at(h, 0), xm = at(-h, 0), yp = at(0, h), ym = at(0, -h);
    const double fd[4] = {(xp.dphi_x - xm.dphi_x) / (2 * h), (yp.dphi_x - ym.dphi_x) / (2 * h),
                          (xp.dphi_y - xm.dphi_y) / (2 * h), (yp.dphi_y - ym.dphi_y) / (2 * h)};
    const double an[4] = {jac.h11, jac.h12, jac.h21, jac.h22};
    const double scale = std::max({std::abs(an[0]), std::abs(an[1]), std::abs(an[2]), std::abs(an[3])});
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(fd[i], an[i], 1e-6 * scale) << "trial " << trial;
  }
}

TEST(Fim, MirrorPairHasNoCrossTerm) {
  const std::vector<AuvTruth> a{{40.0, 0.0, 80.0}, {-40.0, 0.0, 80.0}};
  const auto j = fim::fim({0.0, 0.0, 0.0}, a, UsblConfig{});
  EXPECT_NEAR(j.j12, 0.0, 1e-15 * j.j11);
  EXPECT_NEAR(j.det, j.j11 * j.j22 - j.j12 * j.j12, 0.0);
}

TEST(Fim, ClosedFormAcrossAngularDiversity) {
  UsblConfig c;
  const double z = 60.0, r = 45.0;
  const double s0 = std::hypot(r, z), g0 = std::asin(z / s0);
  for (double chi : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto auvs = ring(r, z, pair_for_chi(chi));
    const double d = det_fim({0.0, 0.0, 0.0}, auvs, c);
    const double o = symmetric_oracle(c, 2, s0, g0, chi);
    EXPECT_NEAR(d, o, 1e-9 * o) << "chi " << chi;
  }
}

TEST(Fim, ClosedFormManyAuvs) {
  UsblConfig c;
  const double z = 60.0, r = 45.0;
  const double s0 = std::hypot(r, z), g0 = std::asin(z / s0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  for (int m : {3, 4}) {
    std::vector<double> phis;
    for (int i = 0; i < m; ++i) phis.push_back(ph(rng));
    const auto auvs = ring(r, z, phis);
    const auto terms = geometry_terms({0.0, 0.0, 0.0}, auvs);
    const double o = symmetric_oracle(c, m, s0, g0, angular_diversity(terms));
    EXPECT_NEAR(det_fim({0.0, 0.0, 0.0}, auvs, c), o, 1e-9 * o);
  }
}

// The symmetric closed form and the assembled determinant are not
// proportional: their ratio drifts with chi.
TEST(Fim, SymmetricFormIsNotProportional) {
  UsblConfig c;
  const double z = 60.0, r = 60.0;
  const double s0 = std::hypot(r, z), g0 = std::asin(z / s0);
  std::vector<double> ratios;
  for (double chi : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto auvs = ring(r, z, pair_for_chi(chi));
    ratios.push_back(det_fim({0.0, 0.0, 0.0}, auvs, c) / det_symmetric({s0, g0, 2, chi}, c));
  }
  EXPECT_GT(std::abs(ratios.back() - ratios.front()), 1e-3 * ratios.front());
}

TEST(Fim, CollinearEqualsFirstTerm) {
  UsblConfig c;
  const double z = 70.0, r = 35.0;
  const double s0 = std::hypot(r, z), g0 = std::asin(z / s0);
  const auto auvs = ring(r, z, {1.1, 1.1, 1.1});
  const auto terms = geometry_terms({0.0, 0.0, 0.0}, auvs);
  EXPECT_NEAR(angular_diversity(terms), 0.0, 1e-15);
  const double o = symmetric_oracle(c, 3, s0, g0, 0.0);
  EXPECT_NEAR(det_fim({0.0, 0.0, 0.0}, auvs, c), o, 1e-9 * o);
}

TEST(Fim, RotationInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  UsblConfig c;
  const UsvState usv{10.0, -20.0, 0.4};
  const auto base = random_auvs(rng, 3);
  const double d0 = det_fim(usv, base, c);
  for (int i = 0; i < 50; ++i) {
    const double t = ang(rng), ct = std::cos(t), st = std::sin(t);
    auto rot = base;
    for (auto& a : rot) {
      const double dx = a.x - usv.x, dy = a.y - usv.y;
      a.x = usv.x + ct * dx - st * dy;
      a.y = usv.y + st * dx + ct * dy;
    }
    EXPECT_NEAR(det_fim(usv, rot, c), d0, 1e-9 * d0);
  }
}

TEST(Fim, TranslationCovariance) {
  std::mt19937_64 rng(6);
  UsblConfig c;
  auto auvs = random_auvs(rng, 4);
  const auto j0 = fim::fim({1.0, 2.0, 0.0}, auvs, c);
  for (auto& a : auvs) {
    a.x += 137.5;
    a.y -= 42.25;
  }
  const auto j1 = fim::fim({138.5, -40.25, 0.0}, auvs, c);
  EXPECT_NEAR(j1.j11, j0.j11, 1e-9 * j0.j11);
  EXPECT_NEAR(j1.j22, j0.j22, 1e-9 * j0.j22);
  EXPECT_NEAR(j1.j12, j0.j12, 1e-9 * (j0.j11 + j0.j22));
}

TEST(Fim, PositiveSemidefinite) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> n(1, 4);
  UsblConfig c;
  for (int i = 0; i < 1000; ++i) {
    const auto auvs = random_auvs(rng, n(rng));
    const auto j = fim::fim({0.0, 0.0, 0.0}, auvs, c);
    const auto [lo, hi] = j.eigenvalues();
    EXPECT_GE(lo, -1e-9);
    EXPECT_GE(hi, -1e-9);
    EXPECT_GE(j.det, -1e-9);
  }
}

TEST(Fim, AddingAnAuvNeverLosesInformation) {
  std::mt19937_64 rng(8);
  UsblConfig c;
  for (int i = 0; i < 100; ++i) {
    auto auvs = random_auvs(rng, 2);
    const double before = det_fim({0.0, 0.0, 0.0}, auvs, c);
    auvs.push_back(random_auvs(rng, 1)[0]);
    EXPECT_GE(det_fim({0.0, 0.0, 0.0}, auvs, c), before * (1.0 - 1e-12));
  }
}

TEST(Fim, PerAuvCarriers) {
  const auto cfgs = usbl::per_auv_configs(UsblConfig{}, 2);
  const std::vector<AuvTruth> a{{30.0, 0.0, 60.0}, {0.0, 30.0, 60.0}};
  const auto j = fim::fim({0.0, 0.0, 0.0}, a, cfgs);
  double j11 = 0.0;
  for (int k = 0; k < 2; ++k) {
    const auto h = phase_jacobian({0.0, 0.0, 0.0}, a[k], cfgs[k]);
    j11 += (h.h11 * h.h11 + h.h21 * h.h21) / (cfgs[k].sigma_phase * cfgs[k].sigma_phase);
  }
  EXPECT_NEAR(j.j11, j11, 1e-12 * j11);
  EXPECT_NE(det_fim({0.0, 0.0, 0.0}, a, cfgs), det_fim({0.0, 0.0, 0.0}, a, UsblConfig{}));
}

TEST(Fim, Errors) {
  UsblConfig c;
  const std::vector<AuvTruth> none;
  EXPECT_THROW(fim::fim({0, 0, 0}, none, c), DomainError);
  const std::vector<AuvTruth> coincident{{50.0, 0.0, 60.0}, {0.0, 0.0, 0.0}};
  try {
    fim::fim({0, 0, 0}, coincident, c);
    FAIL() << "expected DegenerateGeometry";
  } catch (const DegenerateGeometry& e) {
    EXPECT_EQ(e.index(), 1);
  }
  c.sigma_phase = 0.0;
  EXPECT_THROW(fim::fim({0, 0, 0}, std::vector<AuvTruth>{{1, 1, 60}}, c), ConfigError);
}

TEST(FimSymmetric, ChiZeroLeavesFirstTerm) {
  UsblConfig c;
  const double s0 = 150.0, g0 = kPi / 4;
  const double k2 = 4.0 * kPi * kPi * c.freq * c.freq * c.spacing_d * c.spacing_d /
                    (c.sigma_phase * c.sigma_phase * c.sound_speed_c * c.sound_speed_c);
  const double want = k2 * k2 * 3.0 * 2 * std::pow(std::sin(g0), 2) / std::pow(s0, 4);
  EXPECT_NEAR(det_symmetric({s0, g0, 2, 0.0}, c), want, 1e-12 * want);
}

TEST(FimSymmetric, DoublingSlantDividesBySixteen) {
  UsblConfig c;
  for (double chi : {0.0, 0.4, 1.0}) {
    const double a = det_symmetric({80.0, 0.7, 2, chi}, c);
    const double b = det_symmetric({160.0, 0.7, 2, chi}, c);
    EXPECT_NEAR(a / b, 16.0, 1e-12);
  }
}

TEST(FimSymmetric, GoldenValue) {
  EXPECT_NEAR(det_symmetric({150.0, kPi / 4, 2, 1.0}, UsblConfig{}), 0.010916740950498167, 1e-15);
}

TEST(FimSymmetric, Validation) {
  UsblConfig c;
  EXPECT_THROW(det_symmetric({0.0, 0.5, 2, 0.0}, c), ConfigError);
  EXPECT_THROW(det_symmetric({100.0, 0.5, 2, 1.5}, c), ConfigError);
  EXPECT_THROW(det_symmetric({100.0, 0.5, 0, 0.0}, c), ConfigError);
}

TEST(OptimalRadius, CollapsesToLowerBound) {
  UsblConfig c;
  for (double z : {30.0, 60.0, 120.0})
    for (int m : {2, 3, 4})
      for (double chi : {0.0, 0.5, 1.0}) {
        EXPECT_EQ(optimal_radius(z, m, chi, c, 0.0, 200.0), 0.0);
        EXPECT_EQ(optimal_radius(z, m, chi, c, 20.0, 200.0), 20.0);
      }
}

TEST(OptimalRadius, MatchesDenseScan) {
  UsblConfig c;
  const double z = 60.0, r_lo = 5.0, r_hi = 150.0;
  double best_r = r_lo, best = -1.0;
  const int n = 100000;
  for (int i = 0; i <= n; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / n;
    const double s0 = std::hypot(r, z);
    const double v = det_symmetric({s0, std::asin(z / s0), 3, 1.5}, c);
    if (v > best) {
      best = v;
      best_r = r;
    }
  }
  EXPECT_NEAR(optimal_radius(z, 3, 1.5, c, r_lo, r_hi), best_r, 1e-3);
  EXPECT_THROW(optimal_radius(z, 2, 0.0, c, 10.0, 5.0), ConfigError);
}

TEST(Planner, MatchesGridOracle) {
  const std::vector<AuvTruth> a{{25.0, 93.0, 60.0}, {95.0, 40.0, 60.0}};
  const auto cfgs = usbl::per_auv_configs(UsblConfig{}, 2);
  PlannerConfig p;
  const auto w = plan_waypoint(a, cfgs, p);
  const auto g = grid_search(a, cfgs, p.bounds, 1.0);
  EXPECT_GE(w.det, 0.99 * g.det);
  EXPECT_NEAR(w.det, det_fim({w.x, w.y, 0.0}, a, cfgs), 1e-12 * w.det);
  EXPECT_FALSE(w.degenerate);
}

TEST(Planner, TightSquareCentre) {
  // One shared carrier and a tight square: the centre is the optimum. Wider
  // squares or distinct carriers move it off-centre.
  std::vector<AuvTruth> a{{120, 120, 60}, {80, 120, 60}, {80, 80, 60}, {120, 80, 60}};
  const std::vector<UsblConfig> cfgs(4, UsblConfig{});
  const auto w = plan_waypoint(a, cfgs, PlannerConfig{});
  EXPECT_NEAR(w.x, 100.0, 1.0);
  EXPECT_NEAR(w.y, 100.0, 1.0);
}

TEST(Planner, Deterministic) {
  std::mt19937_64 rng(9);
  auto a = random_auvs(rng, 3);
  for (auto& x : a) {
    x.x = std::abs(x.x) * 200.0 / 150.0;
    x.y = std::abs(x.y) * 200.0 / 150.0;
  }
  const auto cfgs = usbl::per_auv_configs(UsblConfig{}, 3);
  PlannerConfig p;
  p.seed = 77;
  const auto w1 = plan_waypoint(a, cfgs, p);
  const auto w2 = plan_waypoint(a, cfgs, p);
  EXPECT_EQ(w1.x, w2.x);
  EXPECT_EQ(w1.y, w2.y);
  EXPECT_EQ(w1.det, w2.det);
  EXPECT_EQ(w1.history, w2.history);
}

TEST(Planner, LongerRunsNeverWorse) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> xy(0.0, 200.0);
  const auto cfgs = usbl::per_auv_configs(UsblConfig{}, 2);
  double sum6 = 0.0, sum24 = 0.0;
  for (int s = 0; s < 30; ++s) {
    const std::vector<AuvTruth> a{{xy(rng), xy(rng), 60.0}, {xy(rng), xy(rng), 60.0}};
    PlannerConfig p;
    p.seed = static_cast<std::uint64_t>(s);
    p.nit = 6;
    const double d6 = plan_waypoint(a, cfgs, p).det;
    p.nit = 24;
    const auto w24 = plan_waypoint(a, cfgs, p);
    // Same seed: generation 6 of the long run is the short run.
    EXPECT_EQ(w24.history[6], d6);
    for (std::size_t g = 1; g < w24.history.size(); ++g)
      EXPECT_GE(w24.history[g], w24.history[g - 1]);
    sum6 += d6;
    sum24 += w24.det;
  }
  EXPECT_GE(sum24, sum6);
}

TEST(Planner, StandoffExcludesNearPoints) {
  const std::vector<AuvTruth> a{{25.0, 93.0, 60.0}, {95.0, 40.0, 60.0}};
  const auto cfgs = usbl::per_auv_configs(UsblConfig{}, 2);
  PlannerConfig p;
  p.standoff_r_min = 20.0;
  const auto w = plan_waypoint(a, cfgs, p);
  for (const auto& x : a) EXPECT_GE(std::hypot(w.x - x.x, w.y - x.y), 20.0 - 1e-9);
}

TEST(Planner, SingleAuvFlaggedDegenerate) {
  const std::vector<AuvTruth> a{{60.0, 140.0, 60.0}};
  const auto cfgs = usbl::per_auv_configs(UsblConfig{}, 1);
  const auto w = plan_waypoint(a, cfgs, PlannerConfig{});
  EXPECT_TRUE(w.degenerate);
  EXPECT_NEAR(w.x, 60.0, 2.0);
  EXPECT_NEAR(w.y, 140.0, 2.0);
}

TEST(Planner, Errors) {
  const std::vector<AuvTruth> none;
  const std::vector<UsblConfig> nc;
  EXPECT_THROW(plan_waypoint(none, nc, PlannerConfig{}), DomainError);
  PlannerConfig p;
  p.pop_size = 4;
  EXPECT_THROW(p.validate(), ConfigError);
  p = PlannerConfig{};
  p.cr = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = PlannerConfig{};
  p.nit = 0;
  EXPECT_THROW(p.validate(), ConfigError);
}
