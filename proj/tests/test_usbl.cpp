#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "usvauv/errors.hpp"
#include "usvauv/usbl.hpp"

using namespace usvauv;
using namespace usvauv::usbl;

namespace {

// Independent hand evaluation of the phase model.
double oracle_gain(double f, double d, double c) { return 2.0 * std::numbers::pi * f * d / c; }

double mean_error(double sigma, double offset, double depth, int trials, std::uint64_t seed) {
  UsblConfig c;
  c.sigma_phase = sigma;
  c.sigma_range = 0.0;
  std::mt19937_64 rng(seed);
  const UsvState usv{0.0, 0.0, 0.0};
  const AuvTruth auv{offset, 0.5 * offset, depth};
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) sum += positioning_error(localize(measure(usv, auv, c, rng), usv, c), auv);
  return sum / trials;
}

}  // namespace

TEST(Usbl, DirectlyBelow) {
  const auto m = true_phases({10.0, 20.0, 0.0}, {10.0, 20.0, 120.0}, UsblConfig{});
  EXPECT_EQ(m.dphi_x, 0.0);
  EXPECT_EQ(m.dphi_y, 0.0);
  EXPECT_EQ(m.slant, 120.0);
}

TEST(Usbl, HandEvaluatedGeometry) {
  const auto m = true_phases({0.0, 0.0, 0.0}, {30.0, 0.0, 120.0}, UsblConfig{});
  const double s = std::sqrt(30.0 * 30.0 + 120.0 * 120.0);
  EXPECT_NEAR(m.slant, 123.69316876852982, 1e-12);
  EXPECT_NEAR(m.dphi_x, oracle_gain(12000.0, 0.033, 1500.0) * 30.0 / s, 1e-15);
  EXPECT_NEAR(m.dphi_x, 0.4024, 1e-3);
  EXPECT_EQ(m.dphi_y, 0.0);
  const auto mirrored = true_phases({0.0, 0.0, 0.0}, {-30.0, 0.0, 120.0}, UsblConfig{});
  EXPECT_EQ(mirrored.dphi_x, -m.dphi_x);
  EXPECT_EQ(mirrored.dphi_y, m.dphi_y);
}

TEST(Usbl, HeaveChangesEffectiveDepth) {
  const auto m = true_phases({0.0, 0.0, 5.0}, {0.0, 0.0, 60.0}, UsblConfig{});
  EXPECT_EQ(m.slant, 65.0);
}

TEST(Usbl, CoincidentIsDegenerate) {
  EXPECT_THROW(true_phases({1.0, 2.0, 0.0}, {1.0, 2.0, 0.0}, UsblConfig{}), DegenerateGeometry);
}

TEST(Usbl, ConfigValidation) {
  UsblConfig c;
  c.freq = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = UsblConfig{};
  c.sigma_phase = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Usbl, PerAuvFrequencies) {
  const auto cfgs = per_auv_configs(UsblConfig{}, 4);
  ASSERT_EQ(cfgs.size(), 4u);
  EXPECT_EQ(cfgs[0].freq, 12000.0);
  EXPECT_EQ(cfgs[1].freq, 14000.0);
  EXPECT_EQ(cfgs[2].freq, 16000.0);
  EXPECT_EQ(cfgs[3].freq, 18000.0);
}

TEST(Usbl, ZeroNoiseMeasureEqualsTruth) {
  UsblConfig c;
  c.sigma_phase = 0.0;
  c.sigma_range = 0.0;
  std::mt19937_64 rng(1);
  const UsvState usv{3.0, 4.0, 0.2};
  const AuvTruth auv{50.0, -20.0, 80.0};
  const auto a = measure(usv, auv, c, rng), b = true_phases(usv, auv, c);
  EXPECT_EQ(a.dphi_x, b.dphi_x);
  EXPECT_EQ(a.dphi_y, b.dphi_y);
  EXPECT_EQ(a.slant, b.slant);
}

TEST(Usbl, SeededMeasureIsDeterministic) {
  std::mt19937_64 r1(42), r2(42);
  const auto a = measure({0, 0, 0}, {10, 10, 50}, UsblConfig{}, r1);
  const auto b = measure({0, 0, 0}, {10, 10, 50}, UsblConfig{}, r2);
  EXPECT_EQ(a.dphi_x, b.dphi_x);
  EXPECT_EQ(a.slant, b.slant);
}

TEST(Usbl, InjectedNoiseStdRecovered) {
  std::mt19937_64 rng(2024);
  const UsblConfig c;
  const UsvState usv{0, 0, 0};
  const AuvTruth auv{40.0, 25.0, 60.0};
  const auto truth = true_phases(usv, auv, c);
  const int n = 10000;
  double s1 = 0.0, s2 = 0.0, r1 = 0.0, r2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto m = measure(usv, auv, c, rng);
    const double e = m.dphi_x - truth.dphi_x, q = m.slant - truth.slant;
    s1 += e;
    s2 += e * e;
    r1 += q;
    r2 += q * q;
  }
  const double sd = std::sqrt((s2 - s1 * s1 / n) / (n - 1));
  const double sr = std::sqrt((r2 - r1 * r1 / n) / (n - 1));
  EXPECT_NEAR(sd, 0.05, 0.05 * 0.05);
  EXPECT_NEAR(sr, 0.3, 0.05 * 0.3);
}

TEST(Usbl, NoiselessInversionIsExact) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> pos(-150.0, 150.0), dep(10.0, 200.0), heave(-5.0, 5.0);
  const UsblConfig c;
  for (int i = 0; i < 1000; ++i) {
    const UsvState usv{pos(rng), pos(rng), heave(rng)};
    const AuvTruth auv{pos(rng), pos(rng), dep(rng)};
    const auto est = localize(true_phases(usv, auv, c), usv, c);
    EXPECT_LE(positioning_error(est, auv), 1e-9);
    EXPECT_FALSE(est.inconsistent);
  }
}

TEST(Usbl, ZeroPhasesGiveUsvPosition) {
  const auto est = localize({0.0, 0.0, 77.0}, {12.0, -4.0, 0.0}, UsblConfig{});
  EXPECT_EQ(est.x_hat, 12.0);
  EXPECT_EQ(est.y_hat, -4.0);
}

TEST(Usbl, PhaseBoundFlagsInconsistentMeasurement) {
  const UsblConfig c;
  const double k = c.phase_gain();
  const auto est = localize({1.01 * k, 0.0, 100.0}, {0, 0, 0}, c);
  EXPECT_TRUE(est.inconsistent);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(-300.0, 300.0);
  for (int i = 0; i < 200; ++i) {
    const auto m = true_phases({0, 0, 0}, {pos(rng), pos(rng), 1.0}, c);
    EXPECT_LE(std::abs(m.dphi_x), k);
    EXPECT_LE(std::abs(m.dphi_y), k);
  }
}

TEST(Usbl, ThreeFourFive) {
  EXPECT_DOUBLE_EQ(positioning_error({3.0, 4.0, 0.0, false}, {0.0, 0.0, 50.0}), 5.0);
  EXPECT_EQ(positioning_error({1.0, 1.0, 0.0, false}, {1.0, 1.0, 50.0}), 0.0);
}

TEST(Usbl, ErrorShrinksWithSlantRange) {
  const double far = mean_error(0.05, 80.0, 120.0, 1000, 5);
  const double near = mean_error(0.05, 40.0, 60.0, 1000, 5);
  EXPECT_LT(near, far);
}

TEST(Usbl, ErrorNonDecreasingInPhaseNoise) {
  double prev = -1.0;
  for (double s : {0.0, 0.02, 0.05, 0.1}) {
    const double e = mean_error(s, 50.0, 60.0, 1000, 9);
    EXPECT_GE(e, prev);
    prev = e;
  }
}
