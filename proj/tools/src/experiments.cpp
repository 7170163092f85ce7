#include "kacsim/app/experiments.hpp"

#include "kacsim/flow.hpp"

#include <algorithm>
#include <cmath>

namespace kacsim::app {

ChaosSweep chaos_sweep(const SimConfig& base, const ChaosSettings& settings, unsigned threads)
{
  ChaosSweep sweep;
  for (const std::size_t n : settings.sizes) {
    SimConfig c = base;
    c.n_particles = n;
    c.t_final = std::max(c.t_final, settings.time);
    c.sample_times = {settings.time};
    c.validate();
    const EnsembleResult result = run_ensemble(c, to_ensemble_mode(c.process), {threads, true, true});
    const Estimate e = chaos_defect(result.snapshots_at(0), settings.phi, settings.psi, settings.symmetrize);
    sweep.rows.push_back({n, settings.time, e});
    sweep.table.add({n, "chaos_defect", e.estimate, e.std_error, c.replicas});
  }
  return sweep;
}

CouplingSweep coupling_sweep(const SimConfig& base, const std::vector<std::size_t>& sizes, unsigned threads)
{
  CouplingSweep sweep;
  sweep.sizes = sizes;
  std::vector<ScalingRow> means;
  for (const std::size_t n : sizes) {
    SimConfig c = base;
    c.n_particles = n;
    c.validate();
    const EnsembleResult result = run_ensemble(c, EnsembleMode::coupled, {threads, false, true});
    sweep.sup_distance.push_back(result.sup_distance);
    const Estimate median = median_estimate(result.sup_distance);
    const MeanStderr mean = mean_stderr(result.sup_distance);
    sweep.table.add({n, "sup_distance_median", median.estimate, median.std_error, c.replicas});
    means.push_back({n, "sup_distance_mean", mean.mean, mean.std_error, c.replicas});
  }
  for (auto& row : means) {
    sweep.table.add(std::move(row));
  }
  return sweep;
}

std::pair<double, double> limit_initial_current(const SimConfig& config, ProcessKind process)
{
  const double m1 = law_moment(config.initial_distribution, 1);
  const double m2 = law_moment(config.initial_distribution, 2);
  if (config.projects(process)) {
    return {m1 / std::sqrt(m2), 1.0};
  }
  return {m1, m2};
}

std::vector<LimitRow> limit_check(const SimConfig& config, unsigned threads)
{
  const EnsembleResult result = run_ensemble(config, EnsembleMode::interacting, {threads, false, true});
  const auto [j0, u] = limit_initial_current(config, ProcessKind::interacting);
  const CurrentSolution zeta(CurrentKind::quenched, u, config.field_strength, j0);
  std::vector<LimitRow> rows;
  for (const auto& agg : result.trajectory_stats) {
    rows.push_back({agg.time, agg.j, zeta.evaluate(agg.time)});
  }
  return rows;
}

} // namespace kacsim::app
