#ifndef KACSIM_ERRORS_HPP
#define KACSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kacsim {

/// Invalid or unknown configuration entry.  key() names the offending key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& what)
    : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key))
  {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// The thermostat force is undefined for a state with zero energy.
class DegenerateStateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace kacsim

#endif // KACSIM_ERRORS_HPP
