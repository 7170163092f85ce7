#include "kacsim/app/cli.hpp"

#include "kacsim/app/acceptance.hpp"
#include "kacsim/app/experiments.hpp"
#include "kacsim/app/outputs.hpp"
#include "kacsim/collision.hpp"
#include "kacsim/config.hpp"
#include "kacsim/csv.hpp"
#include "kacsim/engine.hpp"
#include "kacsim/ensemble.hpp"
#include "kacsim/errors.hpp"
#include "kacsim/initial_state.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#ifndef KACSIM_VERSION
#define KACSIM_VERSION "0.0.0"
#endif

namespace kacsim::app {

namespace {

constexpr std::array<std::string_view, 7> names = {"simulate",    "couple", "chaos-sweep", "coupling-sweep",
                                                   "limit-check", "bounds", "acceptance"};

using Echo = std::vector<std::pair<std::string, std::string>>;

// A parsed, validated experiment that has not touched the filesystem yet.
struct Job {
  Echo echo;
  std::function<int(StagedDirectory&, std::ostream& out, std::ostream& err)> execute;
};

std::string to_text(const std::function<void(std::ostream&)>& write)
{
  std::ostringstream s;
  write(s);
  return s.str();
}

std::vector<std::size_t> parse_sizes(const std::string& key, const std::string& text)
{
  std::vector<std::size_t> sizes;
  for (const auto& part : split(text, ',')) {
    const auto n = parse_unsigned(key, part);
    if (n < 2) {
      throw ConfigError(key, "every N must be at least 2");
    }
    if (!sizes.empty() && n <= sizes.back()) {
      throw ConfigError(key, "N values must be strictly increasing");
    }
    sizes.push_back(static_cast<std::size_t>(n));
  }
  if (sizes.empty()) {
    throw ConfigError(key, "empty list");
  }
  return sizes;
}

std::string join_sizes(const std::vector<std::size_t>& sizes)
{
  std::string s;
  for (const auto n : sizes) {
    s += (s.empty() ? "" : ",") + std::to_string(n);
  }
  return s;
}

TestFunction parse_function_key(const std::string& key, const std::string& text)
{
  try {
    return parse_test_function(trim(text));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

void require_only(const KeyValueConfig& kv, const std::vector<std::string>& allowed)
{
  for (const auto& [key, value] : kv.entries()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(key, "unknown configuration key");
    }
  }
}

Echo echo_of(const SimConfig& c)
{
  return describe(c);
}

Job prepare_simulate(const KeyValueConfig& kv, unsigned threads)
{
  const SimConfig c = make_sim_config(kv, {"dump_history", "replay_history"});
  const bool dump = kv.get("dump_history") ? parse_bool("dump_history", *kv.get("dump_history")) : false;
  const std::optional<std::string> replay = kv.get("replay_history");
  std::vector<CollisionEvent> replay_events;
  if (replay) {
    if (c.replicas != 1) {
      throw ConfigError("replay_history", "replay needs replicas=1");
    }
    std::ifstream in(*replay, std::ios::binary);
    if (!in) {
      throw ConfigError("replay_history", "cannot open '" + *replay + "'");
    }
    try {
      replay_events = read_history_csv(in);
    } catch (const std::exception& e) {
      throw ConfigError("replay_history", e.what());
    }
  }

  Job job;
  job.echo = echo_of(c);
  job.echo.emplace_back("dump_history", dump ? "true" : "false");
  if (replay) {
    job.echo.emplace_back("replay_history", *replay);
  }
  job.execute = [c, dump, replay_events, replaying = replay.has_value(), threads](StagedDirectory& dir,
                                                                                   std::ostream& out, std::ostream&) {
    const ProcessKind process = c.process;
    EnsembleResult result;
    if (replaying) {
      const RngStreamKey key = initial_state_key(c.master_seed, 0);
      ReplayHistory source(replay_events);
      try {
        result.mode = to_ensemble_mode(process);
        result.sample_times = c.resolved_sample_times();
        result.trajectories.push_back(
          simulate(c, process, sample_initial_state(c, key, c.projects(process)), source, {true, c.snapshots}));
        result.trajectory_stats = aggregate(result.trajectories);
      } catch (const std::exception& e) {
        throw ReplicaFailure(0, collision_key(c.master_seed, 0), e.what());
      }
    } else {
      result = run_ensemble(c, to_ensemble_mode(process), {threads, c.snapshots, true});
    }
    dir.write("trajectory.csv", to_text([&](std::ostream& s) { write_trajectory_csv(s, result); }));
    if (c.snapshots) {
      for (std::size_t r = 0; r < result.trajectories.size(); ++r) {
        for (std::size_t k = 0; k < result.trajectories[r].size(); ++k) {
          dir.write(snapshot_name(r, k), snapshot_text(result.trajectories[r][k].snapshot));
        }
      }
    }
    if (dump) {
      // The engine draws events until the first one at or past the last sample time.
      const double last = c.resolved_sample_times().back();
      for (std::size_t r = 0; r < c.replicas; ++r) {
        CollisionHistory history(collision_key(c.master_seed, r), c.n_particles);
        std::vector<CollisionEvent> events;
        double t = 0.0;
        do {
          events.push_back(history.next(t));
          t = events.back().time;
        } while (t < last);
        dir.write("histories/replica_" + std::to_string(r) + ".csv",
                  to_text([&](std::ostream& s) { write_history_csv(s, events); }));
      }
    }
    const auto& final_stats = result.trajectory_stats.back();
    out << to_string(process) << ": " << result.replicas() << " replicas, N=" << c.n_particles << "; at t="
        << format_double(final_stats.time) << " mean J=" << format_double(final_stats.j.mean)
        << " mean U=" << format_double(final_stats.u.mean) << '\n';
    return exit_ok;
  };
  return job;
}

Job prepare_couple(const KeyValueConfig& kv, unsigned threads)
{
  SimConfig c = make_sim_config(kv);
  c.project_to_sphere = c.project_to_sphere.value_or(true);
  Job job;
  job.echo = echo_of(c);
  job.execute = [c, threads](StagedDirectory& dir, std::ostream& out, std::ostream&) {
    const EnsembleResult result = run_ensemble(c, EnsembleMode::coupled, {threads, false, true});
    dir.write("coupled.csv", to_text([&](std::ostream& s) { write_coupled_csv(s, result); }));
    dir.write("sup_distance.csv", to_text([&](std::ostream& s) { write_sup_distance_csv(s, result.sup_distance); }));
    const Estimate median = median_estimate(result.sup_distance);
    out << "coupled: " << result.replicas() << " replicas, N=" << c.n_particles
        << "; median sup distance_N=" << format_double(median.estimate) << '\n';
    return exit_ok;
  };
  return job;
}

// Fits every metric of the table; failures are reported and leave the metric out.
bool fit_all(const ScalingTable& table, const std::vector<std::string>& metrics,
             std::vector<std::pair<std::string, RateFit>>& fits, std::ostream& out, std::ostream& err)
{
  bool ok = true;
  for (const auto& metric : metrics) {
    try {
      const RateFit f = fit_rate(table, metric);
      fits.emplace_back(metric, f);
      out << metric << ": slope=" << format_double(f.slope) << " r2=" << format_double(f.r2) << '\n';
    } catch (const std::domain_error& e) {
      err << metric << ": no rate fit: " << e.what() << '\n';
      ok = false;
    }
  }
  return ok;
}

Job prepare_chaos_sweep(const KeyValueConfig& kv, unsigned threads)
{
  SimConfig c = make_sim_config(kv, {"sweep_n", "chaos_time", "phi", "psi", "symmetrize"});
  ChaosSettings s;
  s.time = c.t_final;
  if (auto v = kv.get("sweep_n")) {
    s.sizes = parse_sizes("sweep_n", *v);
  }
  if (auto v = kv.get("chaos_time")) {
    s.time = parse_real("chaos_time", *v);
    if (!(s.time >= 0.0)) {
      throw ConfigError("chaos_time", "must be >= 0");
    }
  }
  if (auto v = kv.get("phi")) {
    s.phi = parse_function_key("phi", *v);
  }
  if (auto v = kv.get("psi")) {
    s.psi = parse_function_key("psi", *v);
  }
  if (auto v = kv.get("symmetrize")) {
    s.symmetrize = parse_bool("symmetrize", *v);
  }
  if (c.replicas < min_replicas) {
    throw ConfigError("replicas", "chaos estimates need at least " + std::to_string(min_replicas) + " replicas");
  }
  c.t_final = std::max(c.t_final, s.time);
  c.sample_times = {s.time};
  c.snapshots = false;

  Job job;
  job.echo = echo_of(c);
  job.echo.emplace_back("sweep_n", join_sizes(s.sizes));
  job.echo.emplace_back("chaos_time", format_double(s.time));
  job.echo.emplace_back("phi", std::string(name(s.phi)));
  job.echo.emplace_back("psi", std::string(name(s.psi)));
  job.echo.emplace_back("symmetrize", s.symmetrize ? "true" : "false");
  job.echo.emplace_back("test_function_catalog", std::to_string(test_function_catalog_version));
  job.execute = [c, s, threads](StagedDirectory& dir, std::ostream& out, std::ostream& err) {
    const ChaosSweep sweep = chaos_sweep(c, s, threads);
    dir.write("chaos.csv", to_text([&](std::ostream& o) { write_chaos_csv(o, sweep.rows, s.phi, s.psi); }));
    dir.write("scaling.csv", to_text([&](std::ostream& o) { sweep.table.write_csv(o); }));
    for (const auto& row : sweep.rows) {
      out << "N=" << row.n_particles << " defect=" << format_double(row.defect.estimate)
          << " stderr=" << format_double(row.defect.std_error) << '\n';
    }
    std::vector<std::pair<std::string, RateFit>> fits;
    const bool ok = fit_all(sweep.table, {"chaos_defect"}, fits, out, err);
    dir.write("fit.csv", to_text([&](std::ostream& o) { write_fit_csv(o, fits); }));
    return ok ? exit_ok : exit_check_failed;
  };
  return job;
}

Job prepare_coupling_sweep(const KeyValueConfig& kv, unsigned threads)
{
  SimConfig c = make_sim_config(kv, {"sweep_n"});
  c.project_to_sphere = c.project_to_sphere.value_or(true);
  std::vector<std::size_t> sizes{64, 256, 1024, 4096};
  if (auto v = kv.get("sweep_n")) {
    sizes = parse_sizes("sweep_n", *v);
  }
  Job job;
  job.echo = echo_of(c);
  job.echo.emplace_back("sweep_n", join_sizes(sizes));
  job.execute = [c, sizes, threads](StagedDirectory& dir, std::ostream& out, std::ostream& err) {
    const CouplingSweep sweep = coupling_sweep(c, sizes, threads);
    dir.write("sup_distance.csv", to_text([&](std::ostream& o) {
                CsvWriter csv(o, {"N", "replica", "sup_distance_N"});
                for (std::size_t k = 0; k < sweep.sizes.size(); ++k) {
                  for (std::size_t r = 0; r < sweep.sup_distance[k].size(); ++r) {
                    csv.cell(sweep.sizes[k]).cell(r).cell(sweep.sup_distance[k][r]);
                    csv.end_row();
                  }
                }
              }));
    dir.write("scaling.csv", to_text([&](std::ostream& o) { sweep.table.write_csv(o); }));
    std::vector<std::pair<std::string, RateFit>> fits;
    const bool ok = fit_all(sweep.table, {"sup_distance_median", "sup_distance_mean"}, fits, out, err);
    dir.write("fit.csv", to_text([&](std::ostream& o) { write_fit_csv(o, fits); }));
    return ok ? exit_ok : exit_check_failed;
  };
  return job;
}

Job prepare_limit_check(const KeyValueConfig& kv, unsigned threads)
{
  SimConfig c = make_sim_config(kv);
  c.process = ProcessKind::interacting;
  Job job;
  job.echo = echo_of(c);
  job.execute = [c, threads](StagedDirectory& dir, std::ostream& out, std::ostream&) {
    const auto rows = limit_check(c, threads);
    dir.write("limit.csv", to_text([&](std::ostream& o) { write_limit_csv(o, rows); }));
    double worst = 0.0;
    for (const auto& row : rows) {
      if (row.j.std_error > 0.0) {
        worst = std::max(worst, std::abs(row.j.mean - row.zeta) / row.j.std_error);
      }
    }
    out << "limit-check: largest |J_mean - zeta| / stderr = " << format_double(worst) << '\n';
    return exit_ok;
  };
  return job;
}

Job prepare_bounds(const KeyValueConfig& kv)
{
  require_only(kv, {"u_hat", "field", "horizon"});
  const auto get = [&](const char* key) { return kv.get(key) ? parse_real(key, *kv.get(key)) : 1.0; };
  const double u_hat = get("u_hat");
  const double field = get("field");
  const double horizon = get("horizon");
  if (!(u_hat > 0.0)) {
    throw ConfigError("u_hat", "must be positive");
  }
  if (!(field > 0.0)) {
    throw ConfigError("field", "must be positive");
  }
  if (!(horizon > 0.0)) {
    throw ConfigError("horizon", "must be positive");
  }
  Job job;
  job.echo = {{"u_hat", format_double(u_hat)}, {"field", format_double(field)}, {"horizon", format_double(horizon)}};
  job.execute = [=](StagedDirectory& dir, std::ostream& out, std::ostream&) {
    const BoundConstants b = theorem_bounds(u_hat, field, horizon);
    std::ostringstream s;
    s << "delta_t=" << format_double(b.delta_t) << '\n'
      << "n=" << b.n_of_t << '\n'
      << "lambda=" << format_double(b.lambda_rate) << '\n'
      << "growth_factor=" << format_double(b.growth_factor) << '\n';
    dir.write("bounds.txt", s.str());
    out << s.str();
    return exit_ok;
  };
  return job;
}

Job prepare_acceptance(const KeyValueConfig& kv, unsigned threads)
{
  require_only(kv, {"master_seed"});
  AcceptanceOptions options;
  options.threads = threads;
  if (auto v = kv.get("master_seed")) {
    options.master_seed = parse_unsigned("master_seed", *v);
  }
  Job job;
  job.echo = {{"master_seed", std::to_string(options.master_seed)}};
  job.execute = [options](StagedDirectory& dir, std::ostream& out, std::ostream&) {
    const auto results = run_acceptance(options, [&](const CriterionResult& r) {
      out << format_result(r, true) << std::endl;
    });
    std::string report;
    bool all = true;
    for (const auto& r : results) {
      report += format_result(r, false) + '\n';
      all = all && r.passed;
    }
    dir.write("acceptance.txt", report);
    out << (all ? "all criteria passed" : "some criteria failed") << '\n';
    return all ? exit_ok : exit_check_failed;
  };
  return job;
}

Job prepare(Subcommand sub, const KeyValueConfig& kv, unsigned threads)
{
  switch (sub) {
  case Subcommand::simulate:
    return prepare_simulate(kv, threads);
  case Subcommand::couple:
    return prepare_couple(kv, threads);
  case Subcommand::chaos_sweep:
    return prepare_chaos_sweep(kv, threads);
  case Subcommand::coupling_sweep:
    return prepare_coupling_sweep(kv, threads);
  case Subcommand::limit_check:
    return prepare_limit_check(kv, threads);
  case Subcommand::bounds:
    return prepare_bounds(kv);
  case Subcommand::acceptance:
    return prepare_acceptance(kv, threads);
  }
  throw std::logic_error("unhandled subcommand");
}

std::string manifest_text(Subcommand sub, const Echo& echo, const std::vector<std::string>& files)
{
  std::ostringstream s;
  s << "# kacsim " << tool_version() << '\n';
  s << "# subcommand: " << name(sub) << '\n';
  std::vector<std::string> sorted = files;
  std::sort(sorted.begin(), sorted.end());
  s << "# outputs: " << sorted.size() << " files\n";
  for (const auto& f : sorted) {
    s << "#   " << f << '\n';
  }
  for (const auto& [key, value] : echo) {
    s << key << '=' << value << '\n';
  }
  return s.str();
}

} // namespace

std::string_view name(Subcommand s) noexcept
{
  return names[static_cast<std::size_t>(s)];
}

std::optional<Subcommand> parse_subcommand(std::string_view text) noexcept
{
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == text) {
      return static_cast<Subcommand>(k);
    }
  }
  return std::nullopt;
}

const std::vector<std::string>& subcommand_names()
{
  static const std::vector<std::string> all(names.begin(), names.end());
  return all;
}

std::string_view tool_version() noexcept
{
  return KACSIM_VERSION;
}

int run(const ExperimentPlan& plan, std::ostream& out, std::ostream& err)
{
  try {
    KeyValueConfig kv;
    if (plan.config_path) {
      try {
        kv = KeyValueConfig::load(plan.config_path->string());
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError("--config", e.what());
      }
    }
    for (const auto& o : plan.overrides) {
      kv.set_override(o);
    }
    const Job job = prepare(plan.subcommand, kv, plan.threads);

    StagedDirectory dir(plan.output_dir, plan.force);
    const int status = job.execute(dir, out, err);
    dir.write("manifest.txt", manifest_text(plan.subcommand, job.echo, dir.files()));
    dir.commit();
    return status;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const ReplicaFailure& f) {
    err << "error: " << f.what() << '\n';
    return exit_replica_failure;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << '\n';
    return exit_output_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "output error: " << e.what() << '\n';
    return exit_output_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_check_failed;
  }
}

} // namespace kacsim::app
