#include "kacsim/engine.hpp"

#include "kacsim/errors.hpp"
#include "kacsim/initial_state.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace kacsim {

namespace {

// Drives `advance(t_from, t_to)`, `emit(t)` and `jump(event)` until every
// sample time has been emitted.
template <class Advance, class Emit, class Jump>
void run_event_loop(const std::vector<double>& sample_times, CollisionSource& collisions, Advance&& advance,
                    Emit&& emit, Jump&& jump)
{
  std::size_t next_sample = 0;
  double t = 0.0;
  while (next_sample < sample_times.size()) {
    const CollisionEvent event = collisions.next(t);
    while (next_sample < sample_times.size() && sample_times[next_sample] <= event.time) {
      advance(t, sample_times[next_sample]);
      t = sample_times[next_sample];
      emit(t);
      ++next_sample;
    }
    if (next_sample == sample_times.size()) {
      break;
    }
    advance(t, event.time);
    t = event.time;
    jump(event);
  }
}

MasterVector with_laziness(MasterVector v, bool lazy)
{
  if (v.lazy() == lazy) {
    return v;
  }
  return MasterVector(v.values(), lazy);
}

} // namespace

RngStreamKey initial_state_key(std::uint64_t master_seed, std::uint64_t replica)
{
  return {master_seed, replica, StreamTag::initial_state};
}

RngStreamKey collision_key(std::uint64_t master_seed, std::uint64_t replica)
{
  return {master_seed, replica, StreamTag::collision_history};
}

CurrentSolution quenched_current_for(const SimConfig& config, const MasterVector& v0, bool projected)
{
  double j0 = 0.0;
  double u0 = 0.0;
  if (config.quenched_init == QuenchedInit::empirical) {
    const Observables o = observe(v0);
    j0 = o.j;
    u0 = o.u;
  } else {
    const double m1 = law_moment(config.initial_distribution, 1);
    const double m2 = law_moment(config.initial_distribution, 2);
    j0 = projected ? m1 / std::sqrt(m2) : m1;
    u0 = projected ? 1.0 : m2;
  }
  if (!(u0 > 0.0)) {
    if (config.field_strength > 0.0) {
      throw DegenerateStateError("quenched process: zero initial energy, thermostat undefined");
    }
    // E = 0: the quenched flow is the identity whatever the current.
    return CurrentSolution(CurrentKind::quenched, 1.0, 0.0, 0.0, 0.0);
  }
  const double root_u = std::sqrt(u0);
  return CurrentSolution(CurrentKind::quenched, u0, config.field_strength, std::clamp(j0, -root_u, root_u), 0.0);
}

std::vector<TrajectorySample> simulate(const SimConfig& config, ProcessKind process, MasterVector v0,
                                       CollisionSource& collisions, const EngineOptions& options)
{
  MasterVector v = with_laziness(std::move(v0), options.lazy_affine);
  const double field = config.field_strength;
  const bool projected = config.projects(process);
  const auto sample_times = config.resolved_sample_times();

  std::optional<CurrentSolution> current;
  if (process == ProcessKind::quenched) {
    current = quenched_current_for(config, v, projected);
  }

  std::vector<TrajectorySample> samples;
  samples.reserve(sample_times.size());

  auto advance = [&](double from, double to) {
    if (process == ProcessKind::interacting) {
      thermostatted_flow(v, to - from, field);
    } else {
      quenched_flow(v, quenched_coefficients(*current, from, to));
    }
  };
  auto emit = [&](double t) {
    auto values = v.values();
    const Observables o = observe(values);
    TrajectorySample s{t, o.j, o.u, o.m2, o.m4, o.m6, {}};
    if (options.keep_snapshots) {
      s.snapshot = std::move(values);
    }
    samples.push_back(std::move(s));
  };
  auto jump = [&](const CollisionEvent& e) { rotate_pair(v, e); };

  run_event_loop(sample_times, collisions, advance, emit, jump);
  return samples;
}

std::vector<TrajectorySample> simulate(const SimConfig& config, ProcessKind process, std::uint64_t replica,
                                       const EngineOptions& options)
{
  MasterVector v0 = sample_initial_state(config, initial_state_key(config.master_seed, replica),
                                         config.projects(process), options.lazy_affine);
  CollisionHistory history(collision_key(config.master_seed, replica), config.n_particles);
  return simulate(config, process, std::move(v0), history, options);
}

std::vector<CoupledSample> simulate_coupled(const SimConfig& config, MasterVector v0, CollisionSource& collisions,
                                            const EngineOptions& options)
{
  MasterVector v = with_laziness(std::move(v0), options.lazy_affine);
  MasterVector v_hat = v;
  const double field = config.field_strength;
  const bool projected = config.project_to_sphere.value_or(true);
  const CurrentSolution current = quenched_current_for(config, v_hat, projected);
  const auto sample_times = config.resolved_sample_times();

  std::vector<CoupledSample> samples;
  samples.reserve(sample_times.size());

  auto advance = [&](double from, double to) {
    thermostatted_flow(v, to - from, field);
    quenched_flow(v_hat, quenched_coefficients(current, from, to));
  };
  auto emit = [&](double t) {
    const auto a = v.values();
    const auto b = v_hat.values();
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      d2 += d * d;
    }
    const Observables oa = observe(a);
    const Observables ob = observe(b);
    samples.push_back({t, std::sqrt(d2 / static_cast<double>(a.size())), oa.j, ob.j, oa.u, ob.u,
                       current.evaluate(t)});
  };
  auto jump = [&](const CollisionEvent& e) {
    rotate_pair(v, e);
    rotate_pair(v_hat, e);
  };

  run_event_loop(sample_times, collisions, advance, emit, jump);
  return samples;
}

std::vector<CoupledSample> simulate_coupled(const SimConfig& config, std::uint64_t replica,
                                            const EngineOptions& options)
{
  MasterVector v0 = sample_initial_state(config, initial_state_key(config.master_seed, replica),
                                         config.project_to_sphere.value_or(true), options.lazy_affine);
  CollisionHistory history(collision_key(config.master_seed, replica), config.n_particles);
  return simulate_coupled(config, std::move(v0), history, options);
}

double sup_distance(const std::vector<CoupledSample>& samples)
{
  double sup = 0.0;
  for (const auto& s : samples) {
    sup = std::max(sup, s.distance_n);
  }
  return sup;
}

} // namespace kacsim
