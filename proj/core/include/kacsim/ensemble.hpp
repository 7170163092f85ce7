#ifndef KACSIM_ENSEMBLE_HPP
#define KACSIM_ENSEMBLE_HPP

#include "kacsim/config.hpp"
#include "kacsim/engine.hpp"
#include "kacsim/rng.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace kacsim {

enum class EnsembleMode { interacting, quenched, coupled };

struct EnsembleOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
  bool keep_snapshots = false;
  bool lazy_affine = true;
};

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error (sample sd / sqrt(n)); std_error is 0 for n = 1.
MeanStderr mean_stderr(const std::vector<double>& xs);

struct TrajectoryAggregate {
  double time = 0.0;
  MeanStderr j, u, m2, m4, m6;
};

struct CoupledAggregate {
  double time = 0.0;
  MeanStderr distance_n, j_interacting, j_quenched, u_interacting, u_quenched;
  double jhat_ode_mean = 0.0;
};

struct EnsembleResult {
  EnsembleMode mode = EnsembleMode::interacting;
  std::vector<double> sample_times;
  /// Indexed by replica (interacting/quenched modes).
  std::vector<std::vector<TrajectorySample>> trajectories;
  /// Indexed by replica (coupled mode).
  std::vector<std::vector<CoupledSample>> coupled;
  std::vector<double> sup_distance;
  std::vector<TrajectoryAggregate> trajectory_stats;
  std::vector<CoupledAggregate> coupled_stats;

  std::size_t replicas() const noexcept
  {
    return mode == EnsembleMode::coupled ? coupled.size() : trajectories.size();
  }

  /// Snapshot of every replica at sample index k (requires keep_snapshots).
  std::vector<std::vector<double>> snapshots_at(std::size_t k) const;
};

/// A replica threw; carries the key needed to replay it alone.
class ReplicaFailure : public std::runtime_error {
public:
  ReplicaFailure(std::size_t replica, RngStreamKey key, const std::string& cause);

  std::size_t replica() const noexcept { return replica_; }
  const RngStreamKey& key() const noexcept { return key_; }

private:
  std::size_t replica_;
  RngStreamKey key_;
};

/// Per-sample-time statistics, reduced in replica order.
std::vector<TrajectoryAggregate> aggregate(const std::vector<std::vector<TrajectorySample>>& trajectories);
std::vector<CoupledAggregate> aggregate(const std::vector<std::vector<CoupledSample>>& coupled);

/**
 * Runs config.replicas independent replicas in parallel.  Replica r depends
 * only on (config.master_seed, r); results are stored by index and reduced
 * in index order, so the output does not depend on the thread count.
 */
EnsembleResult run_ensemble(const SimConfig& config, EnsembleMode mode, const EnsembleOptions& options = {});

EnsembleMode to_ensemble_mode(ProcessKind kind) noexcept;

} // namespace kacsim

#endif // KACSIM_ENSEMBLE_HPP
