#ifndef KACSIM_INITIAL_STATE_HPP
#define KACSIM_INITIAL_STATE_HPP

#include "kacsim/config.hpp"
#include "kacsim/master_vector.hpp"
#include "kacsim/rng.hpp"

namespace kacsim {

/// N i.i.d. draws from config.initial_distribution, rescaled onto the sphere
/// sum v_i^2 = N when `project` is set.  Pure function of (config, key, project).
///
/// key.tag must be StreamTag::initial_state.  An all-zero draw is redrawn; a
/// law with all mass at zero cannot be projected and raises ConfigError.
MasterVector sample_initial_state(const SimConfig& config, const RngStreamKey& key, bool project, bool lazy = true);

/// Uses config.projects(config.process).
MasterVector sample_initial_state(const SimConfig& config, const RngStreamKey& key);

} // namespace kacsim

#endif // KACSIM_INITIAL_STATE_HPP
