#include "kacsim/errors.hpp"
#include "kacsim/flow.hpp"
#include "kacsim/master_vector.hpp"
#include "kacsim/rng.hpp"

#include "kacsim/oracles/ode.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kacsim;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n)
{
  std::vector<double> v(n);
  for (double& x : v) {
    x = rng.normal() + 0.5 * rng.uniform();
  }
  return v;
}

} // namespace

TEST(SolveCurrent, QuenchedZeroFieldDecay)
{
  const double expected = 0.8 * std::exp(-2.0);
  EXPECT_NEAR(solve_current(CurrentKind::quenched, 1.0, 0.0, 0.8, 0.0, 1.0), expected, 1e-15);
  EXPECT_NEAR(oracles::integrate_current(1.0, 0.0, 2.0, 0.8, 1.0), expected, 1e-11);
  EXPECT_NEAR(expected, 0.10827, 5e-6);
}

TEST(SolveCurrent, InteractingFixedPoint)
{
  for (const double u : {0.25, 1.0, 9.0}) {
    for (const double e : {0.0, 0.3, 4.0}) {
      for (const double t : {0.0, 0.5, 30.0}) {
        EXPECT_NEAR(solve_current(CurrentKind::interacting, u, e, std::sqrt(u), 0.0, t), std::sqrt(u), 1e-14);
      }
    }
  }
}

TEST(SolveCurrent, QuenchedLongHorizonLimit)
{
  const double root = std::sqrt(2.0) - 1.0;
  EXPECT_NEAR(solve_current(CurrentKind::quenched, 1.0, 1.0, 0.0, 0.0, 60.0), root, 1e-14);
  EXPECT_NEAR(solve_current(CurrentKind::quenched, 1.0, 1.0, -0.9, 0.0, 60.0), root, 1e-14);
  EXPECT_NEAR(oracles::integrate_current(1.0, 1.0, 2.0, 0.0, 60.0), root, 1e-10);
  EXPECT_NEAR(quenched_fixed_point(1.0, 1.0), root, 1e-15);
}

TEST(SolveCurrent, MatchesIntegratorOracle)
{
  Rng rng({21, 0, StreamTag::initial_state});
  for (int trial = 0; trial < 200; ++trial) {
    const double u = 0.05 + 4.0 * rng.uniform();
    const double e = 4.0 * rng.uniform();
    const double j0 = std::sqrt(u) * (2.0 * rng.uniform() - 1.0);
    const double t0 = rng.uniform();
    const double dt = 3.0 * rng.uniform();
    for (const auto [kind, damping] : {std::pair{CurrentKind::interacting, 0.0}, std::pair{CurrentKind::quenched, 2.0}}) {
      const double closed = solve_current(kind, u, e, j0, t0, t0 + dt);
      const double numeric = oracles::integrate_current(u, e, damping, j0, dt);
      EXPECT_NEAR(closed, numeric, 1e-9) << "u=" << u << " E=" << e << " j0=" << j0 << " dt=" << dt;
    }
  }
}

TEST(SolveCurrent, ZeroFieldRateIsTwo)
{
  // Least-squares slope of log J on t over [0, 2].
  constexpr int k = 41;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (int i = 0; i < k; ++i) {
    const double t = 2.0 * i / (k - 1);
    const double y = std::log(solve_current(CurrentKind::quenched, 1.0, 0.0, 0.6, 0.0, t));
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double slope = (k * sty - st * sy) / (k * stt - st * st);
  EXPECT_NEAR(-slope, 2.0, 1e-6);
}

TEST(SolveCurrent, ContractViolations)
{
  EXPECT_THROW(solve_current(CurrentKind::quenched, 0.0, 1.0, 0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(solve_current(CurrentKind::quenched, 1.0, 1.0, 1.5, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(solve_current(CurrentKind::interacting, 1.0, -1.0, 0.0, 0.0, 1.0), std::invalid_argument);
}

TEST(ThermostattedFlow, ZeroFieldIsIdentity)
{
  MasterVector v({0.3, -1.2, 2.0});
  const auto before = v.values();
  thermostatted_flow(v, 5.0, 0.0);
  EXPECT_EQ(v.values(), before);
}

TEST(ThermostattedFlow, ConstantStateIsFixed)
{
  MasterVector v({1.5, 1.5, 1.5, 1.5});
  thermostatted_flow(v, 2.0, 3.0);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(v[i], 1.5, 1e-14);
  }
}

TEST(ThermostattedFlow, TwoParticleExampleMatchesOracle)
{
  MasterVector v({1.0, -1.0});
  thermostatted_flow(v, 0.1, 1.0);
  const auto expected = oracles::integrate_thermostatted({1.0, -1.0}, 1.0, 0.1);
  EXPECT_NEAR(v[0], expected[0], 1e-9);
  EXPECT_NEAR(v[1], expected[1], 1e-9);
}

TEST(ThermostattedFlow, RandomStatesMatchOracle)
{
  Rng rng({22, 0, StreamTag::initial_state});
  for (int trial = 0; trial < 40; ++trial) {
    const auto init = random_vector(rng, 1 + rng.below(12));
    const double e = 4.0 * rng.uniform();
    const double dt = rng.uniform();
    MasterVector v(init);
    thermostatted_flow(v, dt, e);
    const auto expected = oracles::integrate_thermostatted(init, e, dt);
    for (std::size_t i = 0; i < init.size(); ++i) {
      EXPECT_NEAR(v[i], expected[i], 1e-9);
    }
  }
}

TEST(ThermostattedFlow, ConservesEnergy)
{
  Rng rng({23, 0, StreamTag::initial_state});
  for (int trial = 0; trial < 500; ++trial) {
    MasterVector v(random_vector(rng, 2 + rng.below(30)));
    const double u0 = energy(v);
    thermostatted_flow(v, rng.uniform(), 4.0 * rng.uniform());
    v.refresh_caches();
    EXPECT_LE(std::abs(energy(v) - u0), 1e-10 * u0);
  }
}

TEST(ThermostattedFlow, Semigroup)
{
  Rng rng({24, 0, StreamTag::initial_state});
  for (int trial = 0; trial < 200; ++trial) {
    const auto init = random_vector(rng, 2 + rng.below(10));
    const double e = 4.0 * rng.uniform();
    const double a = rng.uniform();
    const double b = rng.uniform();
    MasterVector once(init);
    thermostatted_flow(once, a + b, e);
    MasterVector twice(init);
    thermostatted_flow(twice, a, e);
    thermostatted_flow(twice, b, e);
    for (std::size_t i = 0; i < init.size(); ++i) {
      EXPECT_NEAR(once[i], twice[i], 1e-9);
    }
  }
}

TEST(ThermostattedFlow, CurrentConsistency)
{
  Rng rng({25, 0, StreamTag::initial_state});
  for (int trial = 0; trial < 200; ++trial) {
    MasterVector v(random_vector(rng, 2 + rng.below(40)));
    const double e = 4.0 * rng.uniform();
    const double dt = rng.uniform();
    const double expected = solve_current(CurrentKind::interacting, energy(v), e, momentum(v), 0.0, dt);
    thermostatted_flow(v, dt, e);
    v.refresh_caches();
    EXPECT_NEAR(momentum(v), expected, 1e-9);
  }
}

TEST(ThermostattedFlow, ZeroEnergyWithFieldIsDegenerate)
{
  MasterVector v({0.0, 0.0});
  EXPECT_THROW(thermostatted_flow(v, 0.1, 1.0), DegenerateStateError);
}

TEST(QuenchedCoefficients, ZeroFieldIsIdentity)
{
  const CurrentSolution c(CurrentKind::quenched, 1.0, 0.0, 0.4);
  const auto k = quenched_coefficients(c, 0.3, 2.0);
  EXPECT_EQ(k.alpha, 1.0);
  EXPECT_EQ(k.beta, 0.0);
}

TEST(QuenchedCoefficients, FixedPointExample)
{
  const double root = std::sqrt(2.0) - 1.0;
  const CurrentSolution c(CurrentKind::quenched, 1.0, 1.0, root);
  const auto k = quenched_coefficients(c, 0.0, 1.0);
  const double alpha = std::exp(-root);
  EXPECT_NEAR(k.alpha, alpha, 1e-12);
  EXPECT_NEAR(k.beta, (1.0 - alpha) / root, 1e-12);
  // Rounded reference values.
  EXPECT_NEAR(k.alpha, 0.66085, 1e-4);
  EXPECT_NEAR(k.beta, 0.81880, 1e-4);

  const auto numeric = oracles::integrate_quenched({0.0, 1.0}, 1.0, 1.0, root, 0.0, 0.0, 1.0);
  EXPECT_NEAR(k.apply(0.0), numeric[0], 1e-10);
  EXPECT_NEAR(k.apply(1.0), numeric[1], 1e-10);
}

TEST(QuenchedCoefficients, MatchIntegratorOracle)
{
  Rng rng({26, 0, StreamTag::initial_state});
  for (int trial = 0; trial < 200; ++trial) {
    const double u = 0.05 + 4.0 * rng.uniform();
    const double e = 4.0 * rng.uniform();
    const double j0 = std::sqrt(u) * (2.0 * rng.uniform() - 1.0);
    const double t0 = rng.uniform();
    const double s = t0 + 2.0 * rng.uniform();
    const double t = s + 2.0 * rng.uniform();
    const CurrentSolution c(CurrentKind::quenched, u, e, j0, t0);
    const auto k = quenched_coefficients(c, s, t);
    const auto numeric = oracles::integrate_quenched({0.0, 1.0}, u, e, j0, t0, s, t);
    EXPECT_NEAR(k.beta, numeric[0], 1e-9) << "u=" << u << " E=" << e << " j0=" << j0;
    EXPECT_NEAR(k.alpha + k.beta, numeric[1], 1e-9) << "u=" << u << " E=" << e << " j0=" << j0;
  }
}

TEST(QuenchedCoefficients, Composition)
{
  Rng rng({27, 0, StreamTag::initial_state});
  for (int trial = 0; trial < 500; ++trial) {
    const double u = 0.05 + 4.0 * rng.uniform();
    const double e = 4.0 * rng.uniform();
    const double j0 = std::sqrt(u) * (2.0 * rng.uniform() - 1.0);
    const CurrentSolution c(CurrentKind::quenched, u, e, j0);
    const double s = 3.0 * rng.uniform();
    const double m = s + 3.0 * rng.uniform();
    const double t = m + 3.0 * rng.uniform();
    const auto whole = quenched_coefficients(c, s, t);
    const auto parts = quenched_coefficients(c, m, t).after(quenched_coefficients(c, s, m));
    EXPECT_NEAR(parts.alpha, whole.alpha, 1e-10 * std::abs(whole.alpha));
    EXPECT_NEAR(parts.beta, whole.beta, 1e-10 * std::max(1e-300, std::abs(whole.beta)));
  }
}

TEST(QuenchedCoefficients, RequiresQuenchedCurrent)
{
  const CurrentSolution c(CurrentKind::interacting, 1.0, 1.0, 0.0);
  EXPECT_THROW(quenched_coefficients(c, 0.0, 1.0), std::invalid_argument);
}

TEST(QuenchedFlow, Examples)
{
  MasterVector v({1.0, 2.0});
  quenched_flow(v, {1.0, 0.0, 0.0, 1.0});
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[1], 2.0);
  quenched_flow(v, {0.5, 0.25, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(v[0], 0.75);
  EXPECT_DOUBLE_EQ(v[1], 1.25);
}
