#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "usvauv/errors.hpp"
#include "usvauv/sea_env.hpp"

using namespace usvauv;
using namespace usvauv::sea;

namespace {

WaveGridConfig small_grid(std::size_t nx, std::size_t ny, bool forced = false) {
  WaveGridConfig c;
  c.nx = nx;
  c.ny = ny;
  c.forced_west_edge = forced;
  return c;
}

void add_gaussian(WaveGrid& g, double x0, double y0, double amp, double sigma) {
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double dx = i * g.dx() - x0, dy = j * g.dy() - y0;
      g.eta()[g.index(i, j)] += amp * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
}

}  // namespace

TEST(WaveGrid, RejectsCflViolationAndTinyGrids) {
  auto c = small_grid(11, 11);
  c.dt_sub = 0.1;  // limit is 4 / sqrt(2 * 9.81 * 120) = 0.0824
  EXPECT_THROW(WaveGrid{c}, ConfigError);
  EXPECT_THROW(WaveGrid{small_grid(2, 11)}, ConfigError);
  EXPECT_NEAR(WaveGrid::cfl_limit(small_grid(11, 11)), 4.0 / std::sqrt(2.0 * 9.81 * 120.0), 1e-15);
}

TEST(WaveGrid, FullScaleOperatingPointRuns) {
  WaveGrid g(WaveGridConfig{});
  const Forcing f{5.0, 2.0 * std::numbers::pi / 43200.0};
  EXPECT_EQ(advance_to(g, 10.0, f), 200);
  for (double e : g.eta()) EXPECT_TRUE(std::isfinite(e));
  // Forced edge follows eta0 sin(omega t).
  EXPECT_DOUBLE_EQ(g.eta_at(0, 7), 5.0 * std::sin(f.omega * g.t()));
}

TEST(WaveGrid, ZeroStateIsExactFixedPoint) {
  WaveGrid g(small_grid(21, 17, true));
  const WaveGrid before = g;
  advance_to(g, 1000.0, Forcing{0.0, 1.0});
  for (double e : g.eta()) EXPECT_EQ(e, 0.0);
  for (double e : g.u()) EXPECT_EQ(e, 0.0);
  for (double e : g.v()) EXPECT_EQ(e, 0.0);
  EXPECT_EQ(g.steps(), 20000);
  EXPECT_NE(g, before);  // time moved
}

TEST(WaveGrid, AdvanceSubstepCountContract) {
  WaveGrid g(small_grid(5, 5));
  EXPECT_EQ(advance_to(g, 0.0, {}), 0);
  EXPECT_EQ(advance_to(g, 10.0, {}), 200);
  EXPECT_EQ(advance_to(g, 10.0, {}), 0);
  EXPECT_EQ(advance_to(g, 10.01, {}), 1);
  EXPECT_THROW(advance_to(g, 5.0, {}), DomainError);
}

TEST(WaveGrid, MassConservedWithReflectiveWalls) {
  WaveGrid g(small_grid(41, 33));
  add_gaussian(g, 60.0, 70.0, 1.0, 10.0);
  const double s0 = total_elevation(g);
  for (int n = 0; n < 1000; ++n) step_wave(g, {});
  EXPECT_NEAR(total_elevation(g), s0, 1e-6 * std::abs(s0));
}

TEST(WaveGrid, PulseTravelsAtShallowWaterSpeed) {
  auto c = small_grid(601, 3);
  WaveGrid g(c);
  const double x0 = 1200.0;
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double dx = i * g.dx() - x0;
      g.eta()[g.index(i, j)] = std::exp(-dx * dx / (2.0 * 12.0 * 12.0));
    }
  const double t_end = 20.0;
  advance_to(g, t_end, {});
  std::size_t peak = g.nx() / 2;
  for (std::size_t i = g.nx() / 2; i < g.nx(); ++i)
    if (g.eta_at(i, 1) > g.eta_at(peak, 1)) peak = i;
  const double speed = (peak * g.dx() - x0) / g.t();
  const double c_ref = std::sqrt(9.81 * 120.0);
  EXPECT_NEAR(speed, c_ref, 0.05 * c_ref) << "peak at x = " << peak * g.dx();
}

TEST(WaveGrid, DeterministicAcrossRuns) {
  auto run = [] {
    WaveGrid g(small_grid(31, 29, true));
    add_gaussian(g, 40.0, 50.0, 0.5, 8.0);
    advance_to(g, 30.0, Forcing{5.0, 0.3});
    return g;
  };
  EXPECT_EQ(run(), run());
}

TEST(WaveGrid, BlowupIsReported) {
  WaveGrid g(small_grid(7, 7));
  g.eta()[g.index(3, 3)] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(step_wave(g, {}), NumericalBlowup);
}

TEST(Vortex, CenterValues) {
  const VortexSpec v{50.0, 60.0, 40.0, 12.0};
  const auto f = vortex_field(std::span(&v, 1), 50.0, 60.0);
  EXPECT_EQ(f.vx, 0.0);
  EXPECT_EQ(f.vy, 0.0);
  EXPECT_DOUBLE_EQ(f.vorticity, 40.0 / (std::numbers::pi * 144.0));
}

TEST(Vortex, FarFieldMatchesPointVortex) {
  const VortexSpec v{0.0, 0.0, 45.0, 15.0};
  const double r = 10.0 * v.delta;
  const auto f = vortex_field(std::span(&v, 1), r, 0.0);
  EXPECT_NEAR(std::hypot(f.vx, f.vy), v.gamma / (2.0 * std::numbers::pi * r),
              1e-3 * v.gamma / (2.0 * std::numbers::pi * r));
}

TEST(Vortex, OppositePairCancels) {
  const VortexSpec pair[] = {{10.0, 10.0, 50.0, 12.0}, {10.0, 10.0, -50.0, 12.0}};
  for (double x : {0.0, 10.0, 13.0, 80.0}) {
    const auto f = vortex_field(pair, x, 31.0);
    EXPECT_EQ(f.vx, 0.0);
    EXPECT_EQ(f.vy, 0.0);
  }
}

TEST(Vortex, CirculationAtTwentyCoreRadii) {
  const VortexSpec v{100.0, 100.0, 37.0, 11.0};
  const double r = 20.0 * v.delta;
  const int n = 7200;
  double circ = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * std::numbers::pi * (i + 0.5) / n;
    const auto f = vortex_field(std::span(&v, 1), v.x0 + r * std::cos(th), v.y0 + r * std::sin(th));
    circ += (-f.vx * std::sin(th) + f.vy * std::cos(th)) * r * 2.0 * std::numbers::pi / n;
  }
  EXPECT_NEAR(circ, v.gamma, 0.01 * v.gamma);
}

TEST(Vortex, VorticityIntegralOverDisc) {
  const VortexSpec v{0.0, 0.0, 52.0, 14.0};
  const double h = v.delta / 10.0, R = 10.0 * v.delta;
  double total = 0.0;
  for (double x = -R + h / 2; x < R; x += h)
    for (double y = -R + h / 2; y < R; y += h)
      if (x * x + y * y <= R * R) total += vortex_field(std::span(&v, 1), x, y).vorticity * h * h;
  EXPECT_NEAR(total, v.gamma, 0.01 * v.gamma);
}

TEST(Vortex, RotationSymmetryAndTangency) {
  const VortexSpec v{5.0, -3.0, 33.0, 10.0};
  for (double r : {1.0, 7.5, 20.0, 90.0}) {
    const auto a = vortex_field(std::span(&v, 1), v.x0 + r, v.y0);
    const auto b = vortex_field(std::span(&v, 1), v.x0, v.y0 + r);
    EXPECT_NEAR(std::hypot(a.vx, a.vy), std::hypot(b.vx, b.vy), 1e-14);
    EXPECT_NEAR(a.vx * r, 0.0, 1e-14);
    EXPECT_NEAR(b.vy * r, 0.0, 1e-14);
  }
}

TEST(Vortex, RejectsNonPositiveCore) {
  EXPECT_THROW(validate(VortexSpec{0, 0, 1.0, 0.0}), ConfigError);
}

TEST(SampleSea, BilinearOnStaggeredFields) {
  WaveGrid g(small_grid(6, 5));
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      g.eta()[g.index(i, j)] = 2.0 * i * g.dx() + 3.0 * j * g.dy();
      // u sits at ((i + 1/2) dx, j dy)
      g.u()[g.index(i, j)] = (i + 0.5) * g.dx();
      g.v()[g.index(i, j)] = (j + 0.5) * g.dy();
    }
  const auto s = sample_sea(g, {}, 6.0, 9.0);
  EXPECT_NEAR(s.eta, 2.0 * 6.0 + 3.0 * 9.0, 1e-12);
  EXPECT_NEAR(s.wave_u, 6.0, 1e-12);
  EXPECT_NEAR(s.wave_v, 9.0, 1e-12);
  EXPECT_THROW(sample_sea(g, {}, -0.1, 1.0), DomainError);
  EXPECT_THROW(sample_sea(g, {}, 1.0, g.extent_y() + 0.1), DomainError);
}

TEST(SampleSea, TurbulenceBoundedByPointVortex) {
  std::mt19937_64 rng(3);
  const auto vs = place_vortices(200.0, 200.0, VortexPlacement{}, rng);
  ASSERT_EQ(vs.size(), 4u);
  WaveGrid g(WaveGridConfig{});
  std::uniform_real_distribution<double> u(0.0, 200.0);
  for (int n = 0; n < 500; ++n) {
    const double x = u(rng), y = u(rng);
    const auto s = sample_sea(g, vs, x, y);
    double bound = 0.0;
    for (const auto& v : vs) bound += std::abs(v.gamma) / (2.0 * std::numbers::pi * std::hypot(x - v.x0, y - v.y0));
    EXPECT_LE(std::hypot(s.turb_u, s.turb_v), bound * (1.0 + 1e-12));
  }
}

TEST(SeaState, CalmSeaIsZeroAndNeverSteps) {
  SeaConfig c;
  c.enabled = false;
  std::mt19937_64 rng(1);
  SeaState s(c, 200.0, 200.0, rng);
  s.advance_to(100.0);
  EXPECT_EQ(s.t(), 0.0);
  const auto x = s.sample(50.0, 50.0);
  EXPECT_EQ(x.eta, 0.0);
  EXPECT_EQ(x.turb_u, 0.0);
  EXPECT_TRUE(s.vortices().empty());
}

TEST(SeaState, PlacementWithinQuadrantsAndRanges) {
  std::mt19937_64 rng(9);
  const auto vs = place_vortices(200.0, 200.0, VortexPlacement{}, rng);
  for (const auto& v : vs) {
    EXPECT_GE(v.gamma, 30.0);
    EXPECT_LE(v.gamma, 60.0);
    EXPECT_GE(v.delta, 10.0);
    EXPECT_LE(v.delta, 20.0);
    EXPECT_GE(v.x0, 0.0);
    EXPECT_LE(v.x0, 200.0);
  }
}
