#ifndef KACSIM_APP_CLI_HPP
#define KACSIM_APP_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kacsim::app {

enum class Subcommand { simulate, couple, chaos_sweep, coupling_sweep, limit_check, bounds, acceptance };

std::string_view name(Subcommand s) noexcept;
std::optional<Subcommand> parse_subcommand(std::string_view text) noexcept;
const std::vector<std::string>& subcommand_names();

struct ExperimentPlan {
  Subcommand subcommand = Subcommand::simulate;
  std::optional<std::filesystem::path> config_path;
  std::filesystem::path output_dir;
  /// key=value, applied after the config file in order.
  std::vector<std::string> overrides;
  /// 0: hardware concurrency.  Never changes any output byte.
  unsigned threads = 0;
  bool force = false;
};

// Exit statuses of run().
inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1; // acceptance criterion or rate fit failed
inline constexpr int exit_config_error = 2;
inline constexpr int exit_replica_failure = 3;
inline constexpr int exit_output_error = 4;

/// Runs one experiment and writes its outputs plus manifest.txt into
/// plan.output_dir.  Diagnostics go to `err`, summaries to `out`.
int run(const ExperimentPlan& plan, std::ostream& out, std::ostream& err);

/// Version string written into manifests.
std::string_view tool_version() noexcept;

} // namespace kacsim::app

#endif // KACSIM_APP_CLI_HPP
