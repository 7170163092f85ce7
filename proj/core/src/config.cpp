#include "kacsim/config.hpp"

#include "kacsim/csv.hpp"
#include "kacsim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kacsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// E[Z^p] for a standard normal Z.
double standard_normal_moment(int p)
{
  if (p % 2 != 0) {
    return 0.0;
  }
  double m = 1.0;
  for (int k = p - 1; k > 0; k -= 2) {
    m *= k;
  }
  return m;
}

double binomial(int n, int k)
{
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

} // namespace

double law_moment(const InitialDistribution& law, int p)
{
  if (p < 0 || p > 6) {
    throw std::invalid_argument("law_moment: order must be in 0..6");
  }
  return std::visit(
    overloaded{
      [p](const GaussianLaw& g) {
        const double sd = std::sqrt(g.variance);
        double sum = 0.0;
        for (int k = 0; k <= p; ++k) {
          sum += binomial(p, k) * std::pow(g.mean, p - k) * std::pow(sd, k) * standard_normal_moment(k);
        }
        return sum;
      },
      [p](const UniformLaw& u) {
        if (u.hi == u.lo) {
          return std::pow(u.lo, p);
        }
        return (std::pow(u.hi, p + 1) - std::pow(u.lo, p + 1)) / ((p + 1) * (u.hi - u.lo));
      },
      [p](const TwoPointLaw& t) {
        return t.prob_a * std::pow(t.a, p) + (1.0 - t.prob_a) * std::pow(t.b, p);
      },
    },
    law);
}

bool law_is_degenerate_at_zero(const InitialDistribution& law)
{
  return std::visit(
    overloaded{
      [](const GaussianLaw& g) { return g.variance == 0.0 && g.mean == 0.0; },
      [](const UniformLaw& u) { return u.lo == 0.0 && u.hi == 0.0; },
      [](const TwoPointLaw& t) {
        const bool a_zero = t.a == 0.0 || t.prob_a == 0.0;
        const bool b_zero = t.b == 0.0 || t.prob_a == 1.0;
        return a_zero && b_zero;
      },
    },
    law);
}

std::string format_distribution(const InitialDistribution& law)
{
  return std::visit(
    overloaded{
      [](const GaussianLaw& g) { return "gaussian:" + format_double(g.mean) + ":" + format_double(g.variance); },
      [](const UniformLaw& u) { return "uniform:" + format_double(u.lo) + ":" + format_double(u.hi); },
      [](const TwoPointLaw& t) {
        return "two_point:" + format_double(t.a) + ":" + format_double(t.b) + ":" + format_double(t.prob_a);
      },
    },
    law);
}

InitialDistribution parse_distribution(const std::string& text)
{
  const std::string key = "initial_distribution";
  const auto parts = split(trim(text), ':');
  auto number = [&](std::size_t k) { return parse_real(key, parts[k]); };
  const std::string family(trim(parts[0]));
  if (family == "gaussian" && parts.size() == 3) {
    GaussianLaw g{number(1), number(2)};
    if (!(g.variance >= 0.0)) {
      throw ConfigError(key, "gaussian variance must be >= 0");
    }
    return g;
  }
  if (family == "uniform" && parts.size() == 3) {
    UniformLaw u{number(1), number(2)};
    if (!(u.lo <= u.hi)) {
      throw ConfigError(key, "uniform requires lo <= hi");
    }
    return u;
  }
  if (family == "two_point" && parts.size() == 4) {
    TwoPointLaw t{number(1), number(2), number(3)};
    if (!(t.prob_a >= 0.0 && t.prob_a <= 1.0)) {
      throw ConfigError(key, "two_point prob_a must lie in [0, 1]");
    }
    return t;
  }
  throw ConfigError(key, "expected gaussian:MEAN:VAR, uniform:LO:HI or two_point:A:B:PROB_A, got '" + text + "'");
}

std::vector<double> SimConfig::resolved_sample_times() const
{
  if (!sample_times.empty()) {
    return sample_times;
  }
  constexpr int points = 11;
  std::vector<double> times(points);
  for (int k = 0; k < points; ++k) {
    times[k] = t_final * k / (points - 1);
  }
  times.back() = t_final;
  return times;
}

void SimConfig::validate() const
{
  if (n_particles < 2) {
    throw ConfigError("n_particles", "need at least 2 particles for a collision");
  }
  if (!(field_strength >= 0.0) || !std::isfinite(field_strength)) {
    throw ConfigError("field_strength", "must be finite and >= 0");
  }
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw ConfigError("t_final", "must be finite and > 0");
  }
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    const double t = sample_times[k];
    if (!(t >= 0.0 && t <= t_final)) {
      throw ConfigError("sample_times", "every sample time must lie in [0, t_final]");
    }
    if (k > 0 && !(t > sample_times[k - 1])) {
      throw ConfigError("sample_times", "must be strictly increasing");
    }
  }
  if (replicas < 1) {
    throw ConfigError("replicas", "must be >= 1");
  }
  if (projects(process) && law_is_degenerate_at_zero(initial_distribution)) {
    throw ConfigError("initial_distribution", "law is concentrated at 0; cannot project to the sphere");
  }
}

KeyValueConfig KeyValueConfig::parse(const std::string& text)
{
  KeyValueConfig kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string_view body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
    }
    if (kv.contains(key)) {
      throw ConfigError(key, "duplicate key on line " + std::to_string(lineno));
    }
    kv.entries_[key] = value;
  }
  return kv;
}

KeyValueConfig KeyValueConfig::load(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("", "cannot open config file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void KeyValueConfig::set(const std::string& key, const std::string& value)
{
  entries_[key] = value;
}

void KeyValueConfig::set_override(const std::string& assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("", "override '" + assignment + "' is not key=value");
  }
  const std::string key(trim(std::string_view(assignment).substr(0, eq)));
  if (key.empty()) {
    throw ConfigError("", "override '" + assignment + "' has an empty key");
  }
  set(key, std::string(trim(std::string_view(assignment).substr(eq + 1))));
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const
{
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

const std::vector<std::string>& sim_config_keys()
{
  static const std::vector<std::string> keys = {
    "n_particles", "field_strength", "t_final",  "sample_times", "initial_distribution", "project_to_sphere",
    "replicas",    "master_seed",    "process",  "quenched_init", "snapshots",
  };
  return keys;
}

double parse_real(const std::string& key, const std::string& text)
{
  try {
    const double x = parse_double(text);
    if (!std::isfinite(x)) {
      throw std::invalid_argument("non-finite");
    }
    return x;
  } catch (const std::invalid_argument&) {
    throw ConfigError(key, "expected a finite real number, got '" + text + "'");
  }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text)
{
  const std::string_view t = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError(key, "expected an unsigned integer, got '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text)
{
  const std::string_view t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") {
    return true;
  }
  if (t == "false" || t == "0" || t == "no" || t == "off") {
    return false;
  }
  throw ConfigError(key, "expected true/false, got '" + text + "'");
}

std::vector<double> parse_real_list(const std::string& key, const std::string& text)
{
  std::vector<double> values;
  if (trim(text).empty()) {
    return values;
  }
  for (const auto& part : split(text, ',')) {
    values.push_back(parse_real(key, part));
  }
  return values;
}

std::string to_string(ProcessKind kind)
{
  return kind == ProcessKind::interacting ? "interacting" : "quenched";
}

ProcessKind parse_process(const std::string& text)
{
  const std::string_view t = trim(text);
  if (t == "interacting") {
    return ProcessKind::interacting;
  }
  if (t == "quenched") {
    return ProcessKind::quenched;
  }
  throw ConfigError("process", "expected interacting or quenched, got '" + text + "'");
}

SimConfig make_sim_config(const KeyValueConfig& kv, const std::vector<std::string>& extra_keys)
{
  const auto& known = sim_config_keys();
  for (const auto& [key, value] : kv.entries()) {
    const bool recognized = std::find(known.begin(), known.end(), key) != known.end() ||
                            std::find(extra_keys.begin(), extra_keys.end(), key) != extra_keys.end();
    if (!recognized) {
      throw ConfigError(key, "unknown configuration key");
    }
  }

  SimConfig c;
  if (auto v = kv.get("n_particles")) {
    c.n_particles = parse_unsigned("n_particles", *v);
  }
  if (auto v = kv.get("field_strength")) {
    c.field_strength = parse_real("field_strength", *v);
  }
  if (auto v = kv.get("t_final")) {
    c.t_final = parse_real("t_final", *v);
  }
  if (auto v = kv.get("sample_times")) {
    c.sample_times = parse_real_list("sample_times", *v);
  }
  if (auto v = kv.get("initial_distribution")) {
    c.initial_distribution = parse_distribution(*v);
  }
  if (auto v = kv.get("project_to_sphere")) {
    c.project_to_sphere = parse_bool("project_to_sphere", *v);
  }
  if (auto v = kv.get("replicas")) {
    c.replicas = parse_unsigned("replicas", *v);
  }
  if (auto v = kv.get("master_seed")) {
    c.master_seed = parse_unsigned("master_seed", *v);
  }
  if (auto v = kv.get("process")) {
    c.process = parse_process(*v);
  }
  if (auto v = kv.get("quenched_init")) {
    const std::string_view t = trim(*v);
    if (t == "empirical") {
      c.quenched_init = QuenchedInit::empirical;
    } else if (t == "distributional") {
      c.quenched_init = QuenchedInit::distributional;
    } else {
      throw ConfigError("quenched_init", "expected empirical or distributional, got '" + *v + "'");
    }
  }
  if (auto v = kv.get("snapshots")) {
    c.snapshots = parse_bool("snapshots", *v);
  }
  c.validate();
  return c;
}

std::vector<std::pair<std::string, std::string>> describe(const SimConfig& c)
{
  std::string times;
  for (const double t : c.resolved_sample_times()) {
    if (!times.empty()) {
      times += ',';
    }
    times += format_double(t);
  }
  return {
    {"n_particles", std::to_string(c.n_particles)},
    {"field_strength", format_double(c.field_strength)},
    {"t_final", format_double(c.t_final)},
    {"sample_times", times},
    {"initial_distribution", format_distribution(c.initial_distribution)},
    {"project_to_sphere", c.projects(c.process) ? "true" : "false"},
    {"replicas", std::to_string(c.replicas)},
    {"master_seed", std::to_string(c.master_seed)},
    {"process", to_string(c.process)},
    {"quenched_init", c.quenched_init == QuenchedInit::empirical ? "empirical" : "distributional"},
    {"snapshots", c.snapshots ? "true" : "false"},
  };
}

} // namespace kacsim
