#include "kacsim/app/acceptance.hpp"

#include "kacsim/app/cli.hpp"
#include "kacsim/app/experiments.hpp"
#include "kacsim/diagnostics.hpp"
#include "kacsim/ensemble.hpp"
#include "kacsim/flow.hpp"
#include "kacsim/rng.hpp"

#include "kacsim/oracles/assignment.hpp"
#include "kacsim/oracles/ode.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <map>
#include <random>
#include <sstream>

namespace kacsim::app {

namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double x, int digits = 4)
{
  std::ostringstream s;
  s << std::setprecision(digits) << x;
  return s.str();
}

SimConfig gaussian_config(std::size_t n, double field, double t_final, std::size_t replicas, std::uint64_t seed)
{
  SimConfig c;
  c.n_particles = n;
  c.field_strength = field;
  c.t_final = t_final;
  c.replicas = replicas;
  c.master_seed = seed;
  c.initial_distribution = GaussianLaw{0.0, 1.0};
  return c;
}

// Stream for the random instances of criteria 2 and 8; disjoint from
// simulation streams by its replica index.
Rng instance_rng(std::uint64_t seed, std::uint64_t which)
{
  return Rng({seed, 0xacce97ULL + which, StreamTag::initial_state});
}

Outcome energy_conservation(const AcceptanceOptions& o)
{
  SimConfig c = gaussian_config(1024, 1.0, 2.0, 20, o.master_seed);
  c.sample_times.clear();
  for (int k = 0; k <= 40; ++k) {
    c.sample_times.push_back(0.05 * k);
  }
  c.sample_times.back() = 2.0;
  const EnsembleResult r = run_ensemble(c, EnsembleMode::interacting, {o.threads, false, true});
  double worst = 0.0;
  for (const auto& traj : r.trajectories) {
    const double u0 = traj.front().u_value;
    for (const auto& s : traj) {
      worst = std::max(worst, std::abs(s.u_value - u0) / u0);
    }
  }
  return {worst <= 1e-8, "max relative drift of U " + num(worst)};
}

Outcome flow_oracle(const AcceptanceOptions& o)
{
  Rng rng = instance_rng(o.master_seed, 2);
  double worst_thermo = 0.0;
  double worst_quenched = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<double> v(n);
    for (double& x : v) {
      x = rng.normal() + 0.5 * rng.uniform();
    }
    const double field = 4.0 * rng.uniform();
    const double dt = rng.uniform();

    MasterVector mv(v);
    thermostatted_flow(mv, dt, field);
    const auto expected = oracles::integrate_thermostatted(v, field, dt);
    for (std::size_t i = 0; i < n; ++i) {
      worst_thermo = std::max(worst_thermo, std::abs(mv[i] - expected[i]));
    }

    const double u = 0.05 + 4.0 * rng.uniform();
    const double j0 = std::sqrt(u) * (2.0 * rng.uniform() - 1.0);
    const double s = rng.uniform();
    const CurrentSolution current(CurrentKind::quenched, u, field, j0);
    MasterVector mq(v);
    quenched_flow(mq, quenched_coefficients(current, s, s + dt));
    const auto expected_q = oracles::integrate_quenched(v, u, field, j0, 0.0, s, s + dt);
    for (std::size_t i = 0; i < n; ++i) {
      worst_quenched = std::max(worst_quenched, std::abs(mq[i] - expected_q[i]));
    }
  }
  return {worst_thermo <= 1e-9 && worst_quenched <= 1e-9,
          "max deviation thermostatted " + num(worst_thermo) + ", quenched " + num(worst_quenched)};
}

Outcome ode_consistency(const AcceptanceOptions& o)
{
  SimConfig c = gaussian_config(512, 1.0, 2.0, 200, o.master_seed);
  c.process = ProcessKind::quenched;
  c.project_to_sphere = true;
  c.quenched_init = QuenchedInit::distributional;
  c.sample_times = {0.5, 1.0, 2.0};
  const EnsembleResult r = run_ensemble(c, EnsembleMode::quenched, {o.threads, false, true});
  bool ok = true;
  std::string detail;
  for (const auto& agg : r.trajectory_stats) {
    const double jhat = solve_current(CurrentKind::quenched, 1.0, 1.0, 0.0, 0.0, agg.time);
    const double zj = (agg.j.mean - jhat) / agg.j.std_error;
    const double zu = (agg.u.mean - 1.0) / agg.u.std_error;
    ok = ok && std::abs(zj) <= 3.0 && std::abs(zu) <= 3.0;
    detail += (detail.empty() ? "" : "; ") + std::string("t=") + num(agg.time) + " zJ=" + num(zj, 3) +
              " zU=" + num(zu, 3);
  }
  return {ok, detail};
}

Outcome chaos_rate(const AcceptanceOptions& o)
{
  SimConfig c = gaussian_config(32, 1.0, 0.5, 400, o.master_seed);
  c.process = ProcessKind::quenched;
  c.project_to_sphere = true;
  c.quenched_init = QuenchedInit::distributional;
  ChaosSettings s;
  s.sizes = {32, 128, 512, 2048};
  s.time = 0.5;
  s.symmetrize = true;
  const ChaosSweep sweep = chaos_sweep(c, s, o.threads);
  std::string detail;
  for (const auto& row : sweep.rows) {
    const double predicted = oracles::quenched_pair_covariance(row.n_particles, 1.0, 1.0, 0.0, 0.0, s.time);
    detail += "N=" + std::to_string(row.n_particles) + " " + num(row.defect.estimate, 3) + "+-" +
              num(row.defect.std_error, 2) + " (moment equations " + num(predicted, 3) + "); ";
  }
  try {
    const RateFit f = fit_rate(sweep.table, "chaos_defect");
    detail += "slope " + num(f.slope, 3) + " r2 " + num(f.r2, 3);
    return {std::abs(f.slope + 1.0) <= 0.3 && f.r2 >= 0.9, detail};
  } catch (const std::domain_error& e) {
    return {false, detail + "no fit: " + e.what()};
  }
}

Outcome coupling_rate(const AcceptanceOptions& o)
{
  SimConfig c = gaussian_config(64, 1.0, 1.0, 100, o.master_seed);
  c.sample_times.clear();
  for (int k = 0; k <= 100; ++k) {
    c.sample_times.push_back(0.01 * k);
  }
  c.sample_times.back() = 1.0;
  const CouplingSweep sweep = coupling_sweep(c, {64, 256, 1024, 4096}, o.threads);
  const auto rows = sweep.table.rows_for("sup_distance_median");
  bool decreasing = true;
  std::string detail = "medians";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    detail += " " + num(rows[k].mean, 3);
    if (k > 0 && !(rows[k].mean < rows[k - 1].mean)) {
      decreasing = false;
    }
  }
  try {
    const RateFit f = fit_rate(sweep.table, "sup_distance_median");
    detail += "; slope " + num(f.slope, 3) + " r2 " + num(f.r2, 3);
    return {decreasing && f.slope <= -0.20, detail};
  } catch (const std::domain_error& e) {
    return {false, detail + "; no fit: " + e.what()};
  }
}

Outcome moment_control(const AcceptanceOptions& o)
{
  SimConfig c = gaussian_config(256, 1.0, 2.0, 50, o.master_seed);
  c.project_to_sphere = false;
  c.sample_times.clear();
  for (int k = 0; k <= 20; ++k) {
    c.sample_times.push_back(0.1 * k);
  }
  c.sample_times.back() = 2.0;
  const EnsembleResult r = run_ensemble(c, EnsembleMode::interacting, {o.threads, false, true});
  const double m6_0 = law_moment(c.initial_distribution, 6);
  double worst = 0.0;
  bool finite = true;
  for (const auto& agg : r.trajectory_stats) {
    finite = finite && std::isfinite(agg.m6.mean);
    worst = std::max(worst, agg.m6.mean);
  }
  return {finite && worst <= 50.0 * m6_0, "max ensemble m6 " + num(worst) + " vs budget " + num(50.0 * m6_0)};
}

Outcome fluctuation_identity(const AcceptanceOptions& o)
{
  bool ok = true;
  std::string detail;
  for (const std::size_t n : {256u, 1024u}) {
    SimConfig c = gaussian_config(n, 0.0, 1.0, 400, o.master_seed);
    c.process = ProcessKind::quenched;
    c.project_to_sphere = true;
    c.quenched_init = QuenchedInit::distributional;
    c.sample_times = {0.5, 1.0};
    const EnsembleResult r = run_ensemble(c, EnsembleMode::quenched, {o.threads, true, true});
    for (std::size_t k = 0; k < c.sample_times.size(); ++k) {
      const double jhat = solve_current(CurrentKind::quenched, 1.0, 0.0, 0.0, 0.0, c.sample_times[k]);
      const Estimate e = current_fluctuation(r.snapshots_at(k), jhat);
      const double target = 1.0 - jhat * jhat;
      const double z = (e.estimate - target) / e.std_error;
      ok = ok && std::abs(z) <= 3.0;
      detail += (detail.empty() ? "" : "; ") + std::string("N=") + std::to_string(n) + " t=" +
                num(c.sample_times[k]) + " " + num(e.estimate) + " (z=" + num(z, 3) + ")";
    }
  }
  return {ok, detail};
}

Outcome w1_exactness(const AcceptanceOptions& o)
{
  Rng rng = instance_rng(o.master_seed, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal() * 2.0 + rng.uniform();
    }
    const double sorted = wasserstein1(EmpiricalMeasure(a), EmpiricalMeasure(b));
    worst = std::max(worst, std::abs(sorted - oracles::brute_force_w1(a, b)));
  }
  return {worst <= 1e-12, "max |sorted - brute force| " + num(worst)};
}

Outcome bound_constants(const AcceptanceOptions&)
{
  const BoundConstants b = theorem_bounds(1.0, 1.0, 1.0);
  const bool ok = std::abs(b.delta_t - 0.232046) <= 1e-5 && b.n_of_t == 6;
  return {ok, "delta_t " + num(b.delta_t, 9) + " (required 0.232046 +- 1e-5), n " + std::to_string(b.n_of_t)};
}

std::map<std::string, std::string> read_tree(const fs::path& root)
{
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      std::ifstream in(entry.path(), std::ios::binary);
      files[fs::relative(entry.path(), root).generic_string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
  }
  return files;
}

Outcome determinism(const AcceptanceOptions& o)
{
  std::random_device rd;
  const fs::path scratch = fs::temp_directory_path() / ("kacsim-determinism-" + std::to_string(rd()));
  fs::create_directories(scratch);
  const std::string seed = "master_seed=" + std::to_string(o.master_seed);
  const std::vector<std::pair<Subcommand, std::vector<std::string>>> runs = {
    {Subcommand::simulate,
     {seed, "n_particles=64", "replicas=8", "field_strength=1", "snapshots=true", "dump_history=true"}},
    {Subcommand::simulate, {seed, "n_particles=64", "replicas=8", "process=quenched"}},
    {Subcommand::couple, {seed, "n_particles=64", "replicas=8"}},
    {Subcommand::chaos_sweep, {seed, "sweep_n=8,16,32", "replicas=40", "chaos_time=0.5", "t_final=0.5"}},
    {Subcommand::coupling_sweep, {seed, "sweep_n=16,64,256", "replicas=20"}},
    {Subcommand::limit_check, {seed, "n_particles=64", "replicas=20"}},
    {Subcommand::bounds, {"u_hat=1", "field=1", "horizon=1"}},
  };
  bool ok = true;
  std::string detail;
  int index = 0;
  for (const auto& [sub, overrides] : runs) {
    std::vector<std::map<std::string, std::string>> trees;
    std::vector<int> statuses;
    for (const unsigned threads : {1u, 3u}) {
      ExperimentPlan plan;
      plan.subcommand = sub;
      plan.output_dir = scratch / (std::to_string(index) + "_" + std::to_string(threads));
      plan.overrides = overrides;
      plan.threads = threads;
      std::ostringstream out, err;
      statuses.push_back(run(plan, out, err));
      trees.push_back(read_tree(plan.output_dir));
    }
    const bool same = statuses[0] == statuses[1] && trees[0] == trees[1] && statuses[0] != exit_config_error &&
                      statuses[0] != exit_output_error && !trees[0].empty();
    ok = ok && same;
    detail += std::string(name(sub)) + (same ? " identical" : " DIFFERS") + " (" + std::to_string(trees[0].size()) +
              " files); ";
    ++index;
  }
  std::error_code ec;
  fs::remove_all(scratch, ec);
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* title;
  double budget;
  Outcome (*check)(const AcceptanceOptions&);
};

const std::vector<Criterion>& criteria()
{
  static const std::vector<Criterion> all = {
    {1, "energy conservation (interacting)", 30.0, energy_conservation},
    {2, "flows match numeric integration", 10.0, flow_oracle},
    {3, "quenched ensemble follows the current ODE", 120.0, ode_consistency},
    {4, "chaos defect decays like 1/N", 600.0, chaos_rate},
    {5, "pathwise coupling distance decays", 600.0, coupling_rate},
    {6, "sixth moment stays bounded", 60.0, moment_control},
    {7, "current fluctuation identity", 120.0, fluctuation_identity},
    {8, "W1 equals optimal assignment", 5.0, w1_exactness},
    {9, "coupling window constants", 1.0, bound_constants},
    {10, "outputs are deterministic", 60.0, determinism},
  };
  return all;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result)
{
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.budget_seconds = c.budget;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome outcome = c.check(options);
      r.passed = outcome.passed;
      r.detail = outcome.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.budget_seconds) {
      r.passed = false;
      r.detail += "; over the " + num(r.budget_seconds) + " s budget";
    }
    if (on_result) {
      on_result(r);
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r, bool with_timing)
{
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << " [" << std::setw(2) << r.id << "] " << r.title << ": " << r.detail;
  if (with_timing) {
    s << " (" << std::fixed << std::setprecision(2) << r.seconds << " s of " << std::setprecision(0)
      << r.budget_seconds << " s)";
  }
  return s.str();
}

} // namespace kacsim::app
