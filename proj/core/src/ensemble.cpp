#include "kacsim/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace kacsim {

MeanStderr mean_stderr(const std::vector<double>& xs)
{
  MeanStderr r;
  if (xs.empty()) {
    return r;
  }
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (const double x : xs) {
    sum += x;
  }
  r.mean = sum / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (const double x : xs) {
      ss += (x - r.mean) * (x - r.mean);
    }
    r.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

std::vector<std::vector<double>> EnsembleResult::snapshots_at(std::size_t k) const
{
  std::vector<std::vector<double>> out;
  out.reserve(trajectories.size());
  for (const auto& traj : trajectories) {
    if (k >= traj.size() || traj[k].snapshot.empty()) {
      throw std::logic_error("snapshots_at: snapshots were not recorded");
    }
    out.push_back(traj[k].snapshot);
  }
  return out;
}

ReplicaFailure::ReplicaFailure(std::size_t replica, RngStreamKey key, const std::string& cause)
  : std::runtime_error("replica " + std::to_string(replica) + " failed (master_seed=" +
                       std::to_string(key.master_seed) + ", replica_index=" + std::to_string(key.replica_index) +
                       "): " + cause),
    replica_(replica), key_(key)
{}

namespace {

template <class Sample, class Field>
MeanStderr column(const std::vector<std::vector<Sample>>& runs, std::size_t k, Field field)
{
  std::vector<double> xs;
  xs.reserve(runs.size());
  for (const auto& run : runs) {
    xs.push_back(field(run.at(k)));
  }
  return mean_stderr(xs);
}

template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task, std::vector<std::exception_ptr>& errors)
{
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t r = next.fetch_add(1);
      if (r >= count) {
        return;
      }
      try {
        task(r);
      } catch (...) {
        errors[r] = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned k = 0; k < threads; ++k) {
    pool.emplace_back(worker);
  }
}

} // namespace

std::vector<TrajectoryAggregate> aggregate(const std::vector<std::vector<TrajectorySample>>& runs)
{
  std::vector<TrajectoryAggregate> out;
  if (runs.empty()) {
    return out;
  }
  for (std::size_t k = 0; k < runs.front().size(); ++k) {
    TrajectoryAggregate a;
    a.time = runs.front()[k].time;
    a.j = column(runs, k, [](const TrajectorySample& s) { return s.j_value; });
    a.u = column(runs, k, [](const TrajectorySample& s) { return s.u_value; });
    a.m2 = column(runs, k, [](const TrajectorySample& s) { return s.m2; });
    a.m4 = column(runs, k, [](const TrajectorySample& s) { return s.m4; });
    a.m6 = column(runs, k, [](const TrajectorySample& s) { return s.m6; });
    out.push_back(a);
  }
  return out;
}

std::vector<CoupledAggregate> aggregate(const std::vector<std::vector<CoupledSample>>& runs)
{
  std::vector<CoupledAggregate> out;
  if (runs.empty()) {
    return out;
  }
  for (std::size_t k = 0; k < runs.front().size(); ++k) {
    CoupledAggregate a;
    a.time = runs.front()[k].time;
    a.distance_n = column(runs, k, [](const CoupledSample& s) { return s.distance_n; });
    a.j_interacting = column(runs, k, [](const CoupledSample& s) { return s.j_interacting; });
    a.j_quenched = column(runs, k, [](const CoupledSample& s) { return s.j_quenched; });
    a.u_interacting = column(runs, k, [](const CoupledSample& s) { return s.u_interacting; });
    a.u_quenched = column(runs, k, [](const CoupledSample& s) { return s.u_quenched; });
    a.jhat_ode_mean = column(runs, k, [](const CoupledSample& s) { return s.jhat_ode; }).mean;
    out.push_back(a);
  }
  return out;
}

EnsembleResult run_ensemble(const SimConfig& config, EnsembleMode mode, const EnsembleOptions& options)
{
  config.validate();
  const std::size_t replicas = config.replicas;
  EngineOptions engine_options{options.lazy_affine, options.keep_snapshots};

  EnsembleResult result;
  result.mode = mode;
  result.sample_times = config.resolved_sample_times();
  std::vector<std::exception_ptr> errors(replicas);

  if (mode == EnsembleMode::coupled) {
    result.coupled.resize(replicas);
    parallel_for(
      replicas, options.threads,
      [&](std::size_t r) { result.coupled[r] = simulate_coupled(config, r, engine_options); }, errors);
  } else {
    const ProcessKind process = mode == EnsembleMode::interacting ? ProcessKind::interacting : ProcessKind::quenched;
    result.trajectories.resize(replicas);
    parallel_for(
      replicas, options.threads,
      [&](std::size_t r) { result.trajectories[r] = simulate(config, process, r, engine_options); }, errors);
  }

  for (std::size_t r = 0; r < replicas; ++r) {
    if (errors[r]) {
      std::string cause = "unknown error";
      try {
        std::rethrow_exception(errors[r]);
      } catch (const std::exception& e) {
        cause = e.what();
      } catch (...) {
      }
      throw ReplicaFailure(r, initial_state_key(config.master_seed, r), cause);
    }
  }

  if (mode == EnsembleMode::coupled) {
    result.coupled_stats = aggregate(result.coupled);
    result.sup_distance.reserve(replicas);
    for (const auto& run : result.coupled) {
      result.sup_distance.push_back(sup_distance(run));
    }
  } else {
    result.trajectory_stats = aggregate(result.trajectories);
  }
  return result;
}

EnsembleMode to_ensemble_mode(ProcessKind kind) noexcept
{
  return kind == ProcessKind::interacting ? EnsembleMode::interacting : EnsembleMode::quenched;
}

} // namespace kacsim
