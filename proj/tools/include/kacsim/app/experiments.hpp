#ifndef KACSIM_APP_EXPERIMENTS_HPP
#define KACSIM_APP_EXPERIMENTS_HPP

#include "kacsim/config.hpp"
#include "kacsim/diagnostics.hpp"
#include "kacsim/ensemble.hpp"

#include <cstddef>
#include <vector>

namespace kacsim::app {

struct ChaosSettings {
  std::vector<std::size_t> sizes{32, 128, 512, 2048};
  double time = 0.5;
  TestFunction phi = TestFunction::identity;
  TestFunction psi = TestFunction::identity;
  bool symmetrize = true;
};

struct ChaosRow {
  std::size_t n_particles = 0;
  double time = 0.0;
  Estimate defect;
};

struct ChaosSweep {
  std::vector<ChaosRow> rows;
  ScalingTable table; // metric "chaos_defect"
};

/// Chaos defect at one time for each N; process and everything else from `base`.
ChaosSweep chaos_sweep(const SimConfig& base, const ChaosSettings& settings, unsigned threads);

struct CouplingSweep {
  /// sup_distance[k][r]: replica r at sizes[k].
  std::vector<std::size_t> sizes;
  std::vector<std::vector<double>> sup_distance;
  ScalingTable table; // metrics "sup_distance_median" and "sup_distance_mean"
};

CouplingSweep coupling_sweep(const SimConfig& base, const std::vector<std::size_t>& sizes, unsigned threads);

struct LimitRow {
  double time = 0.0;
  MeanStderr j;
  double zeta = 0.0;
};

/// Interacting ensemble mean current against the limit current equation,
/// started from the law's normalized first moment.
std::vector<LimitRow> limit_check(const SimConfig& config, unsigned threads);

/// J(0) and U for the limit equation implied by the initial law.
std::pair<double, double> limit_initial_current(const SimConfig& config, ProcessKind process);

} // namespace kacsim::app

#endif // KACSIM_APP_EXPERIMENTS_HPP
