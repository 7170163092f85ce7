#ifndef KACSIM_COLLISION_HPP
#define KACSIM_COLLISION_HPP

#include "kacsim/master_vector.hpp"
#include "kacsim/rng.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace kacsim {

/// One jump of the Kac process: at `time` the pair (i, j), i < j, rotates by `angle`.
struct CollisionEvent {
  double time = 0.0;
  std::size_t i = 0;
  std::size_t j = 1;
  double angle = 0.0;

  friend bool operator==(const CollisionEvent&, const CollisionEvent&) = default;
};

/// (v_i, v_j) <- (v_i cos th + v_j sin th, v_j cos th - v_i sin th).
/// Throws std::out_of_range for an invalid pair.
void rotate_pair(MasterVector& v, const CollisionEvent& e);

/**
 * Law of the rotation angle on (-pi, pi].
 *
 * The default is the uniform law.  A bounded density b(theta) with
 * b <= bound can be supplied instead; it is sampled by rejection.
 */
class AngleLaw {
public:
  AngleLaw() = default;
  AngleLaw(std::function<double(double)> density, double bound);

  double sample(Rng& rng) const;
  bool is_uniform() const noexcept { return !density_; }

private:
  std::function<double(double)> density_;
  double bound_ = 0.0;
};

/// Anything that yields the next collision after a given time.
class CollisionSource {
public:
  virtual ~CollisionSource() = default;
  virtual CollisionEvent next(double t_now) = 0;
};

/**
 * Lazily generated collision history for an n-particle system.
 *
 * Waiting times are exponential with total rate n (each of the n(n-1)/2
 * pairs jumps at rate 2/(n-1)); the pair is uniform over unordered pairs and
 * the angle follows the AngleLaw.  Draw order per event is time, pair, angle.
 * Rebuilding from the same key replays the identical sequence.
 */
class CollisionHistory final : public CollisionSource {
public:
  CollisionHistory(const RngStreamKey& key, std::size_t n, AngleLaw angle_law = {});

  CollisionEvent next(double t_now) override;

  double total_rate() const noexcept { return static_cast<double>(n_); }
  std::size_t particles() const noexcept { return n_; }

private:
  Rng rng_;
  std::size_t n_;
  AngleLaw angle_law_;
};

/// sample_next_event(history, t_now): the next event of the history after t_now.
CollisionEvent sample_next_event(CollisionHistory& history, double t_now);

/// Plays back a recorded history.  Throws std::out_of_range when exhausted.
class ReplayHistory final : public CollisionSource {
public:
  explicit ReplayHistory(std::vector<CollisionEvent> events);

  CollisionEvent next(double t_now) override;
  std::size_t remaining() const noexcept { return events_.size() - cursor_; }

private:
  std::vector<CollisionEvent> events_;
  std::size_t cursor_ = 0;
};

/// Forwards another source and keeps every event it hands out.
class RecordingSource final : public CollisionSource {
public:
  explicit RecordingSource(CollisionSource& inner) : inner_(inner) {}

  CollisionEvent next(double t_now) override;
  const std::vector<CollisionEvent>& events() const noexcept { return events_; }

private:
  CollisionSource& inner_;
  std::vector<CollisionEvent> events_;
};

/// CSV with header event_index,time,i,j,theta; reals in shortest round-trip form.
void write_history_csv(std::ostream& out, std::span<const CollisionEvent> events);
std::vector<CollisionEvent> read_history_csv(std::istream& in);

} // namespace kacsim

#endif // KACSIM_COLLISION_HPP
