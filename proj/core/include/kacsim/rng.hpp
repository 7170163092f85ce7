#ifndef KACSIM_RNG_HPP
#define KACSIM_RNG_HPP

#include <cstdint>
#include <random>

namespace kacsim {

/// Independent random sources inside one replica.
enum class StreamTag : std::uint32_t {
  initial_state = 0,
  collision_history = 1,
};

/// Identifies one reproducible random stream.  Distinct (replica_index, tag)
/// pairs under the same master seed give independent streams.
struct RngStreamKey {
  std::uint64_t master_seed = 0;
  std::uint64_t replica_index = 0;
  StreamTag tag = StreamTag::initial_state;

  friend bool operator==(const RngStreamKey&, const RngStreamKey&) = default;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/**
 * Random stream bound to an RngStreamKey.
 *
 * The engine is std::mt19937_64 seeded through std::seed_seq, both of which
 * are fully specified by the standard.  The standard distributions are not,
 * so every transform used by the simulator is written out here; the same key
 * yields the same numbers with any conforming toolchain.
 */
class Rng {
public:
  explicit Rng(const RngStreamKey& key);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform integer on [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  /// Exponential waiting time with the given rate.
  double exponential(double rate) noexcept;

  /// Standard normal deviate (Marsaglia polar method).
  double normal() noexcept;

  const RngStreamKey& key() const noexcept { return key_; }

private:
  RngStreamKey key_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

} // namespace kacsim

#endif // KACSIM_RNG_HPP
