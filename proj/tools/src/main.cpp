#include "kacsim/app/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
  using namespace kacsim::app;

  CLI::App app{"Event-driven simulation of the thermostatted Kac model"};
  app.set_version_flag("--version", std::string(tool_version()));

  std::string subcommand;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replicas;
  unsigned threads = 0;
  bool force = false;
  std::vector<std::string> sets;

  app.add_option("subcommand", subcommand, "Experiment to run")
    ->required()
    ->check(CLI::IsMember(subcommand_names()));
  app.add_option("--config", config, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output directory (created atomically)")->required();
  app.add_option("--seed", seed, "Master seed (same as --set master_seed=...)");
  app.add_option("--replicas", replicas, "Replica count (same as --set replicas=...)");
  app.add_option("--threads", threads, "Worker threads; 0 uses all cores");
  app.add_flag("--force", force, "Replace an existing output directory");
  app.add_option("--set", sets, "Override a config key: key=value (repeatable)")->take_all();

  CLI11_PARSE(app, argc, argv);

  ExperimentPlan plan;
  plan.subcommand = *parse_subcommand(subcommand);
  if (!config.empty()) {
    plan.config_path = config;
  }
  plan.output_dir = out;
  plan.threads = threads;
  plan.force = force;
  if (seed) {
    plan.overrides.push_back("master_seed=" + std::to_string(*seed));
  }
  if (replicas) {
    plan.overrides.push_back("replicas=" + std::to_string(*replicas));
  }
  plan.overrides.insert(plan.overrides.end(), sets.begin(), sets.end());
  return run(plan, std::cout, std::cerr);
}
