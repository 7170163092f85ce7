#ifndef KACSIM_CONFIG_HPP
#define KACSIM_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kacsim {

enum class ProcessKind { interacting, quenched };

/// How the quenched current and energy are seeded at t = 0: from the realized
/// initial vector of each replica, or from the moments of the sampling law.
enum class QuenchedInit { empirical, distributional };

struct GaussianLaw {
  double mean = 0.0;
  double variance = 1.0;
};

struct UniformLaw {
  double lo = -1.0;
  double hi = 1.0;
};

struct TwoPointLaw {
  double a = -1.0;
  double b = 1.0;
  double prob_a = 0.5;
};

/// Supported one-particle initial laws.  All have finite moments of every order.
using InitialDistribution = std::variant<GaussianLaw, UniformLaw, TwoPointLaw>;

/// Raw moment E[v^p] of an initial law, p in 0..6.
double law_moment(const InitialDistribution& law, int p);

/// True if the law puts all its mass at zero.
bool law_is_degenerate_at_zero(const InitialDistribution& law);

std::string format_distribution(const InitialDistribution& law);
InitialDistribution parse_distribution(const std::string& text);

struct SimConfig {
  std::size_t n_particles = 1024;
  double field_strength = 1.0;
  double t_final = 1.0;
  std::vector<double> sample_times;
  InitialDistribution initial_distribution = GaussianLaw{};
  /// Unset means "default for the process": on for interacting, off for quenched.
  std::optional<bool> project_to_sphere;
  std::size_t replicas = 1;
  std::uint64_t master_seed = 0;
  ProcessKind process = ProcessKind::interacting;
  QuenchedInit quenched_init = QuenchedInit::empirical;
  bool snapshots = false;

  bool projects(ProcessKind kind) const
  {
    return project_to_sphere.value_or(kind == ProcessKind::interacting);
  }

  /// Sample times, or 11 evenly spaced points on [0, t_final] when none were given.
  std::vector<double> resolved_sample_times() const;

  /// Throws ConfigError naming the first violated field.
  void validate() const;
};

/// Ordered key=value view of a config file.
class KeyValueConfig {
public:
  /// Parses "key=value" lines; '#' starts a comment.  Duplicate keys are an error.
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::string& path);

  /// Inserts or replaces.
  void set(const std::string& key, const std::string& value);
  /// Parses a single "key=value" override.
  void set_override(const std::string& assignment);

  std::optional<std::string> get(const std::string& key) const;
  bool contains(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

private:
  std::map<std::string, std::string> entries_;
};

/// Every key understood by apply_sim_keys.
const std::vector<std::string>& sim_config_keys();

/// Builds a SimConfig from the recognized keys.  Keys outside sim_config_keys()
/// and `extra_keys` raise ConfigError.
SimConfig make_sim_config(const KeyValueConfig& kv, const std::vector<std::string>& extra_keys = {});

/// Key/value echo of a config, in sim_config_keys() order.
std::vector<std::pair<std::string, std::string>> describe(const SimConfig& config);

std::string to_string(ProcessKind kind);
ProcessKind parse_process(const std::string& text);

// Value parsers shared with the command-line layer.  All throw ConfigError(key, ...).
double parse_real(const std::string& key, const std::string& text);
std::uint64_t parse_unsigned(const std::string& key, const std::string& text);
bool parse_bool(const std::string& key, const std::string& text);
std::vector<double> parse_real_list(const std::string& key, const std::string& text);

} // namespace kacsim

#endif // KACSIM_CONFIG_HPP
