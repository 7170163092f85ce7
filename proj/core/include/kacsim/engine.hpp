#ifndef KACSIM_ENGINE_HPP
#define KACSIM_ENGINE_HPP

#include "kacsim/collision.hpp"
#include "kacsim/config.hpp"
#include "kacsim/flow.hpp"
#include "kacsim/master_vector.hpp"
#include "kacsim/rng.hpp"

#include <cstdint>
#include <vector>

namespace kacsim {

struct TrajectorySample {
  double time = 0.0;
  double j_value = 0.0;
  double u_value = 0.0;
  double m2 = 0.0;
  double m4 = 0.0;
  double m6 = 0.0;
  /// Velocities at `time`; empty unless snapshots were requested.
  std::vector<double> snapshot;
};

/// Interacting and quenched state on the same (V0, collision history).
struct CoupledSample {
  double time = 0.0;
  /// ||V - V_hat|| / sqrt(N)
  double distance_n = 0.0;
  double j_interacting = 0.0;
  double j_quenched = 0.0;
  double u_interacting = 0.0;
  double u_quenched = 0.0;
  /// Quenched current from its ODE at `time`.
  double jhat_ode = 0.0;
};

struct EngineOptions {
  bool lazy_affine = true;
  bool keep_snapshots = false;
};

RngStreamKey initial_state_key(std::uint64_t master_seed, std::uint64_t replica);
RngStreamKey collision_key(std::uint64_t master_seed, std::uint64_t replica);

/// Quenched current and energy for a replica starting at v0, seeded per
/// config.quenched_init.  `projected` tells whether v0 lies on the sphere.
CurrentSolution quenched_current_for(const SimConfig& config, const MasterVector& v0, bool projected);

/**
 * Exact event-driven simulation of one replica.
 *
 * Between jumps the state follows the closed-form flow (thermostatted or
 * quenched); at each jump one pair is rotated.  Flow segments are split at
 * sample times, so samples are exact and there is no time grid.
 */
std::vector<TrajectorySample> simulate(const SimConfig& config, ProcessKind process, MasterVector v0,
                                       CollisionSource& collisions, const EngineOptions& options = {});

/// Replica `replica` with the streams derived from config.master_seed.
std::vector<TrajectorySample> simulate(const SimConfig& config, ProcessKind process, std::uint64_t replica,
                                       const EngineOptions& options = {});

/// Both processes from the same v0, consuming the same collision events.
std::vector<CoupledSample> simulate_coupled(const SimConfig& config, MasterVector v0, CollisionSource& collisions,
                                            const EngineOptions& options = {});

/// Coupled replica; v0 is projected unless project_to_sphere is explicitly false.
std::vector<CoupledSample> simulate_coupled(const SimConfig& config, std::uint64_t replica,
                                            const EngineOptions& options = {});

/// Largest distance_n over the samples.
double sup_distance(const std::vector<CoupledSample>& samples);

} // namespace kacsim

#endif // KACSIM_ENGINE_HPP
