#include "kacsim/initial_state.hpp"

#include "kacsim/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>

namespace kacsim {

namespace {

constexpr int max_redraws = 1000;

double draw(const InitialDistribution& law, Rng& rng)
{
  if (const auto* g = std::get_if<GaussianLaw>(&law)) {
    return g->mean + std::sqrt(g->variance) * rng.normal();
  }
  if (const auto* u = std::get_if<UniformLaw>(&law)) {
    return u->lo + (u->hi - u->lo) * rng.uniform();
  }
  const auto& t = std::get<TwoPointLaw>(law);
  return rng.uniform() < t.prob_a ? t.a : t.b;
}

} // namespace

MasterVector sample_initial_state(const SimConfig& config, const RngStreamKey& key, bool project, bool lazy)
{
  if (key.tag != StreamTag::initial_state) {
    throw std::invalid_argument("sample_initial_state: key must carry StreamTag::initial_state");
  }
  if (config.n_particles < 2) {
    throw ConfigError("n_particles", "need at least 2 particles");
  }
  if (project && law_is_degenerate_at_zero(config.initial_distribution)) {
    throw ConfigError("initial_distribution", "law is concentrated at 0; cannot project to the sphere");
  }

  Rng rng(key);
  const std::size_t n = config.n_particles;
  std::vector<double> v(n);
  for (int attempt = 0; attempt < max_redraws; ++attempt) {
    double sum_sq = 0.0;
    for (double& x : v) {
      x = draw(config.initial_distribution, rng);
      sum_sq += x * x;
    }
    if (!project) {
      return MasterVector(std::move(v), lazy);
    }
    if (sum_sq > 0.0) {
      const double factor = std::sqrt(static_cast<double>(n) / sum_sq);
      for (double& x : v) {
        x *= factor;
      }
      return MasterVector(std::move(v), lazy);
    }
  }
  throw ConfigError("initial_distribution", "repeated all-zero draws; cannot project to the sphere");
}

MasterVector sample_initial_state(const SimConfig& config, const RngStreamKey& key)
{
  return sample_initial_state(config, key, config.projects(config.process));
}

} // namespace kacsim
