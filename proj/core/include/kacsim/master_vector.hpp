#ifndef KACSIM_MASTER_VECTOR_HPP
#define KACSIM_MASTER_VECTOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kacsim {

/**
 * The N velocities of one replica.
 *
 * Velocities are held as v_i = scale * stored_i + offset so that a flow
 * segment (the same affine map for every particle) costs O(1); a collision
 * materializes only the two coordinates it touches.  Running sums of v and
 * v^2 are updated incrementally and recomputed from scratch every
 * refresh_interval events.
 *
 * With lazy == false every affine update is written through immediately;
 * the two modes agree to rounding.
 */
class MasterVector {
public:
  static constexpr std::uint64_t refresh_interval = std::uint64_t{1} << 16;

  MasterVector() = default;
  explicit MasterVector(std::vector<double> velocities, bool lazy = true);

  std::size_t size() const noexcept { return stored_.size(); }
  bool lazy() const noexcept { return lazy_; }

  double operator[](std::size_t i) const noexcept { return scale_ * stored_[i] + offset_; }

  /// Cached sum of v_i.
  double sum() const noexcept { return sum_; }
  /// Cached sum of v_i^2.
  double sum_sq() const noexcept { return sum_sq_; }

  /// Materialized copy of all velocities.
  std::vector<double> values() const;

  /// Overwrites the two coordinates touched by a collision.  Sum of squares
  /// is treated as unchanged (exact for rotations).
  void set_pair_preserving_norm(std::size_t i, std::size_t j, double vi, double vj);

  /// v_i <- alpha * v_i + beta for every i.
  void apply_affine(double alpha, double beta);

  /// Writes the pending affine map into storage.
  void materialize();

  /// Recomputes the cached sums from the current velocities.
  void refresh_caches();

private:
  void count_event();

  std::vector<double> stored_;
  double scale_ = 1.0;
  double offset_ = 0.0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::uint64_t events_since_refresh_ = 0;
  bool lazy_ = true;
};

/// J(V) = (1/N) sum v_i, from the cache.
double momentum(const MasterVector& v) noexcept;

/// U(V) = (1/N) sum v_i^2, from the cache.
double energy(const MasterVector& v) noexcept;

/// (1/N) sum v_i^p for p in {2, 4, 6}; throws std::invalid_argument otherwise.
double moment(const MasterVector& v, int p);

/// Observables computed in one fresh pass over the velocities.
struct Observables {
  double j = 0.0;
  double u = 0.0;
  double m2 = 0.0;
  double m4 = 0.0;
  double m6 = 0.0;
};

Observables observe(std::span<const double> velocities) noexcept;
Observables observe(const MasterVector& v);

} // namespace kacsim

#endif // KACSIM_MASTER_VECTOR_HPP
