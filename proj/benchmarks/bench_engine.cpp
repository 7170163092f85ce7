#include "kacsim/collision.hpp"
#include "kacsim/diagnostics.hpp"
#include "kacsim/engine.hpp"
#include "kacsim/flow.hpp"
#include "kacsim/initial_state.hpp"

#include <benchmark/benchmark.h>

using namespace kacsim;

namespace {

SimConfig bench_config(std::size_t n, double t_final)
{
  SimConfig c;
  c.n_particles = n;
  c.field_strength = 1.0;
  c.t_final = t_final;
  c.sample_times = {t_final};
  return c;
}

// Events per second for one replica; per-event cost should not grow with N
// in lazy mode.
void simulate_replica(benchmark::State& state, ProcessKind process, bool lazy)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  const SimConfig c = bench_config(n, 2.0);
  for (auto _ : state) {
    auto traj = simulate(c, process, 0, {lazy, false});
    benchmark::DoNotOptimize(traj);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n));
}

void BM_InteractingLazy(benchmark::State& s) { simulate_replica(s, ProcessKind::interacting, true); }
void BM_InteractingEager(benchmark::State& s) { simulate_replica(s, ProcessKind::interacting, false); }
void BM_QuenchedLazy(benchmark::State& s) { simulate_replica(s, ProcessKind::quenched, true); }

void BM_Coupled(benchmark::State& state)
{
  const SimConfig c = bench_config(static_cast<std::size_t>(state.range(0)), 1.0);
  for (auto _ : state) {
    auto samples = simulate_coupled(c, 0);
    benchmark::DoNotOptimize(samples);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_QuenchedCoefficients(benchmark::State& state)
{
  const CurrentSolution current(CurrentKind::quenched, 1.0, 1.0, 0.1);
  double s = 0.0;
  for (auto _ : state) {
    const auto k = quenched_coefficients(current, s, s + 1e-3);
    benchmark::DoNotOptimize(k);
    s += 1e-3;
  }
}

void BM_Wasserstein(benchmark::State& state)
{
  const SimConfig c = bench_config(static_cast<std::size_t>(state.range(0)), 1.0);
  const auto a = sample_initial_state(c, initial_state_key(1, 0)).values();
  const auto b = sample_initial_state(c, initial_state_key(1, 1)).values();
  for (auto _ : state) {
    const double w = wasserstein1(EmpiricalMeasure(a), EmpiricalMeasure(b));
    benchmark::DoNotOptimize(w);
  }
}

} // namespace

BENCHMARK(BM_InteractingLazy)->RangeMultiplier(8)->Range(64, 32768)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InteractingEager)->RangeMultiplier(8)->Range(64, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuenchedLazy)->RangeMultiplier(8)->Range(64, 32768)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Coupled)->RangeMultiplier(8)->Range(64, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuenchedCoefficients);
BENCHMARK(BM_Wasserstein)->Range(64, 65536);
BENCHMARK_MAIN();
