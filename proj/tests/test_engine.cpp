#include "kacsim/engine.hpp"
#include "kacsim/ensemble.hpp"
#include "kacsim/diagnostics.hpp"
#include "kacsim/initial_state.hpp"

#include "kacsim/oracles/ode.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

using namespace kacsim;

namespace {

SimConfig base_config(std::size_t n, double field, double t_final, std::size_t replicas = 1)
{
  SimConfig c;
  c.n_particles = n;
  c.field_strength = field;
  c.t_final = t_final;
  c.replicas = replicas;
  c.master_seed = 2024;
  c.initial_distribution = GaussianLaw{0.0, 1.0};
  return c;
}

bool same_bits(double a, double b)
{
  return std::memcmp(&a, &b, sizeof a) == 0;
}

} // namespace

TEST(Simulate, SamplesAtRequestedTimes)
{
  auto c = base_config(16, 1.0, 2.0);
  c.sample_times = {0.0, 0.25, 1.0, 2.0};
  const auto traj = simulate(c, ProcessKind::interacting, 0);
  ASSERT_EQ(traj.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(traj[k].time, c.sample_times[k]);
  }
}

TEST(Simulate, InteractingStaysOnSphere)
{
  for (const double field : {0.5, 2.0}) {
    auto c = base_config(200, field, 4.0);
    const auto traj = simulate(c, ProcessKind::interacting, 3);
    for (const auto& s : traj) {
      EXPECT_NEAR(s.u_value, 1.0, 1e-8) << "t=" << s.time;
      EXPECT_DOUBLE_EQ(s.m2, s.u_value);
    }
  }
}

TEST(Simulate, LazyAgreesWithEager)
{
  auto c = base_config(8, 1.0, 100.0 / 8.0);
  c.sample_times = {0.0, 3.0, 100.0 / 8.0};
  for (const auto process : {ProcessKind::interacting, ProcessKind::quenched}) {
    EngineOptions lazy{true, true};
    EngineOptions eager{false, true};
    const auto a = simulate(c, process, 1, lazy);
    const auto b = simulate(c, process, 1, eager);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_NEAR(a[k].snapshot[i], b[k].snapshot[i], 1e-12);
      }
    }
  }
}

TEST(Simulate, ReplayedHistoryIsBitExact)
{
  auto c = base_config(40, 1.3, 3.0);
  const MasterVector v0 = sample_initial_state(c, initial_state_key(c.master_seed, 0));
  CollisionHistory h(collision_key(c.master_seed, 0), c.n_particles);
  RecordingSource rec(h);
  const auto live = simulate(c, ProcessKind::interacting, v0, rec, {true, true});
  ReplayHistory replay(rec.events());
  const auto again = simulate(c, ProcessKind::interacting, v0, replay, {true, true});
  ASSERT_EQ(live.size(), again.size());
  for (std::size_t k = 0; k < live.size(); ++k) {
    ASSERT_EQ(live[k].snapshot.size(), again[k].snapshot.size());
    for (std::size_t i = 0; i < live[k].snapshot.size(); ++i) {
      EXPECT_TRUE(same_bits(live[k].snapshot[i], again[k].snapshot[i]));
    }
  }
}

TEST(Simulate, ZeroFieldQuenchedEqualsInteracting)
{
  auto c = base_config(30, 0.0, 2.0);
  c.project_to_sphere = true;
  const auto a = simulate(c, ProcessKind::interacting, 5, {true, true});
  const auto b = simulate(c, ProcessKind::quenched, 5, {true, true});
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].snapshot, b[k].snapshot);
  }
}

TEST(SimulateCoupled, StartsTogether)
{
  const auto c = base_config(64, 1.0, 1.0);
  const auto samples = simulate_coupled(c, 0);
  EXPECT_EQ(samples.front().time, 0.0);
  EXPECT_EQ(samples.front().distance_n, 0.0);
  EXPECT_GT(samples.back().distance_n, 0.0);
}

TEST(SimulateCoupled, ZeroFieldNeverSeparates)
{
  const auto c = base_config(64, 0.0, 3.0);
  for (const auto& s : simulate_coupled(c, 2)) {
    EXPECT_EQ(s.distance_n, 0.0);
    EXPECT_EQ(s.j_interacting, s.j_quenched);
  }
}

TEST(SimulateCoupled, TracksBothProcessesOnTheSameHistory)
{
  const auto c = base_config(50, 1.0, 2.0);
  const auto coupled = simulate_coupled(c, 4);
  const auto inter = simulate(c, ProcessKind::interacting, 4);
  SimConfig q = c;
  q.project_to_sphere = true;
  const auto quen = simulate(q, ProcessKind::quenched, 4);
  for (std::size_t k = 0; k < coupled.size(); ++k) {
    EXPECT_NEAR(coupled[k].j_interacting, inter[k].j_value, 1e-12);
    EXPECT_NEAR(coupled[k].j_quenched, quen[k].j_value, 1e-12);
    EXPECT_NEAR(coupled[k].jhat_ode, solve_current(CurrentKind::quenched, 1.0, 1.0, coupled[0].j_quenched, 0.0, coupled[k].time), 1e-12);
  }
}

TEST(Ensemble, SingleReplicaAggregateIsTheTrajectory)
{
  const auto c = base_config(20, 1.0, 1.0, 1);
  const auto result = run_ensemble(c, EnsembleMode::interacting, {1});
  const auto traj = simulate(c, ProcessKind::interacting, 0);
  ASSERT_EQ(result.trajectory_stats.size(), traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    EXPECT_EQ(result.trajectory_stats[k].j.mean, traj[k].j_value);
    EXPECT_EQ(result.trajectory_stats[k].m4.mean, traj[k].m4);
    EXPECT_EQ(result.trajectory_stats[k].j.std_error, 0.0);
  }
}

TEST(Ensemble, ThreadCountDoesNotChangeResults)
{
  const auto c = base_config(32, 1.0, 1.0, 13);
  for (const auto mode : {EnsembleMode::interacting, EnsembleMode::quenched, EnsembleMode::coupled}) {
    const auto a = run_ensemble(c, mode, {1});
    const auto b = run_ensemble(c, mode, {4});
    if (mode == EnsembleMode::coupled) {
      ASSERT_EQ(a.coupled_stats.size(), b.coupled_stats.size());
      for (std::size_t k = 0; k < a.coupled_stats.size(); ++k) {
        EXPECT_TRUE(same_bits(a.coupled_stats[k].distance_n.mean, b.coupled_stats[k].distance_n.mean));
        EXPECT_TRUE(same_bits(a.coupled_stats[k].distance_n.std_error, b.coupled_stats[k].distance_n.std_error));
      }
      EXPECT_EQ(a.sup_distance, b.sup_distance);
    } else {
      ASSERT_EQ(a.trajectory_stats.size(), b.trajectory_stats.size());
      for (std::size_t k = 0; k < a.trajectory_stats.size(); ++k) {
        EXPECT_TRUE(same_bits(a.trajectory_stats[k].j.mean, b.trajectory_stats[k].j.mean));
        EXPECT_TRUE(same_bits(a.trajectory_stats[k].m6.std_error, b.trajectory_stats[k].m6.std_error));
      }
    }
  }
}

TEST(Ensemble, FailureCarriesReplayKey)
{
  auto c = base_config(4, 1.0, 1.0, 3);
  c.initial_distribution = TwoPointLaw{0.0, 0.0, 0.5};
  c.project_to_sphere = false;
  try {
    run_ensemble(c, EnsembleMode::interacting, {2});
    FAIL() << "expected ReplicaFailure";
  } catch (const ReplicaFailure& f) {
    EXPECT_EQ(f.replica(), 0u);
    EXPECT_EQ(f.key().master_seed, c.master_seed);
  }
}

TEST(Ensemble, ZeroFieldCurrentVarianceIsOne)
{
  // E = 0 on the sphere: N Var(J) = E[(sum v)^2]/N = 1 by exchangeability and
  // symmetry of the projected Gaussian.
  auto c = base_config(64, 0.0, 1.0, 400);
  c.sample_times = {1.0};
  const auto result = run_ensemble(c, EnsembleMode::interacting);
  std::vector<double> nj2;
  for (const auto& traj : result.trajectories) {
    const double j = traj[0].j_value;
    nj2.push_back(64.0 * j * j);
  }
  const MeanStderr est = mean_stderr(nj2);
  EXPECT_LT(std::abs(est.mean - 1.0), 3.0 * est.std_error) << est.mean << " +- " << est.std_error;
}

TEST(Ensemble, KacWalkFourthMomentRelaxes)
{
  auto c = base_config(1024, 0.0, 10.0, 200);
  c.sample_times = {10.0};
  const auto result = run_ensemble(c, EnsembleMode::interacting);
  const double m4 = result.trajectory_stats[0].m4.mean;
  EXPECT_LE(std::abs(m4 - 3.0), 0.1) << m4;
  // Uniform law on the sphere of radius sqrt(N): m4 = 3N/(N+2).
  EXPECT_LT(std::abs(m4 - 3.0 * 1024.0 / 1026.0), 3.0 * result.trajectory_stats[0].m4.std_error + 0.01);
}

TEST(Ensemble, InteractingCurrentFollowsLimitEquation)
{
  auto c = base_config(512, 1.0, 2.0, 200);
  c.sample_times = {0.5, 1.0, 2.0};
  const auto result = run_ensemble(c, EnsembleMode::interacting);
  for (const auto& agg : result.trajectory_stats) {
    const double jhat = solve_current(CurrentKind::quenched, 1.0, 1.0, 0.0, 0.0, agg.time);
    EXPECT_LT(std::abs(agg.j.mean - jhat), 3.0 * agg.j.std_error) << "t=" << agg.time << " J=" << agg.j.mean
                                                                   << " jhat=" << jhat;
  }
}

TEST(Ensemble, QuenchedMeanCurrentIsTheOde)
{
  // Given V0 the quenched ensemble mean of J solves the ODE from J(V0).
  auto c = base_config(128, 1.0, 1.0, 300);
  c.project_to_sphere = true;
  c.quenched_init = QuenchedInit::distributional;
  c.sample_times = {0.5, 1.0};
  const auto result = run_ensemble(c, EnsembleMode::quenched);
  for (const auto& agg : result.trajectory_stats) {
    const double jhat = solve_current(CurrentKind::quenched, 1.0, 1.0, 0.0, 0.0, agg.time);
    EXPECT_LT(std::abs(agg.j.mean - jhat), 3.0 * agg.j.std_error);
  }
}

TEST(Ensemble, SnapshotsAreKeptPerReplica)
{
  auto c = base_config(10, 1.0, 1.0, 5);
  c.sample_times = {0.0, 1.0};
  const auto result = run_ensemble(c, EnsembleMode::interacting, {2, true});
  const auto snaps = result.snapshots_at(1);
  ASSERT_EQ(snaps.size(), 5u);
  for (std::size_t r = 0; r < 5; ++r) {
    ASSERT_EQ(snaps[r].size(), 10u);
    double s = 0.0;
    for (const double x : snaps[r]) {
      s += x;
    }
    EXPECT_NEAR(s / 10.0, result.trajectories[r][1].j_value, 1e-14);
  }
}

TEST(Ensemble, QuenchedPairCovarianceFollowsMomentEquations)
{
  // Small N so the 1/N correlation is resolvable.
  auto c = base_config(4, 1.0, 0.5, 100000);
  c.project_to_sphere = true;
  c.quenched_init = QuenchedInit::distributional;
  c.sample_times = {0.5};
  const auto result = run_ensemble(c, EnsembleMode::quenched, {0, true});
  const Estimate e = chaos_defect(result.snapshots_at(0), TestFunction::identity, TestFunction::identity, true);
  const double expected = oracles::quenched_pair_covariance(4, 1.0, 1.0, 0.0, 0.0, 0.5);
  EXPECT_GT(expected, 0.0);
  EXPECT_LT(std::abs(e.estimate - expected), 3.0 * e.std_error) << e.estimate << " +- " << e.std_error << " vs "
                                                                  << expected;
}
