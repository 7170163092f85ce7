#include "kacsim/collision.hpp"

#include "kacsim/csv.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace kacsim {

void rotate_pair(MasterVector& v, const CollisionEvent& e)
{
  if (e.i >= v.size() || e.j >= v.size() || e.i == e.j) {
    throw std::out_of_range("rotate_pair: invalid pair (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                            ") for N = " + std::to_string(v.size()));
  }
  const double c = std::cos(e.angle);
  const double s = std::sin(e.angle);
  const double vi = v[e.i];
  const double vj = v[e.j];
  v.set_pair_preserving_norm(e.i, e.j, vi * c + vj * s, vj * c - vi * s);
}

AngleLaw::AngleLaw(std::function<double(double)> density, double bound)
  : density_(std::move(density)), bound_(bound)
{
  if (!(bound_ > 0.0)) {
    throw std::invalid_argument("AngleLaw: density bound must be positive");
  }
}

double AngleLaw::sample(Rng& rng) const
{
  // pi - 2 pi u maps [0, 1) onto (-pi, pi].
  constexpr double pi = std::numbers::pi;
  if (!density_) {
    return pi - 2.0 * pi * rng.uniform();
  }
  while (true) {
    const double theta = pi - 2.0 * pi * rng.uniform();
    if (bound_ * rng.uniform() < density_(theta)) {
      return theta;
    }
  }
}

CollisionHistory::CollisionHistory(const RngStreamKey& key, std::size_t n, AngleLaw angle_law)
  : rng_(key), n_(n), angle_law_(std::move(angle_law))
{
  if (n_ < 2) {
    throw std::invalid_argument("CollisionHistory: need at least 2 particles");
  }
}

CollisionEvent CollisionHistory::next(double t_now)
{
  CollisionEvent e;
  e.time = t_now + rng_.exponential(total_rate());
  std::size_t a = rng_.below(n_);
  std::size_t b = rng_.below(n_ - 1);
  if (b >= a) {
    ++b;
  }
  e.i = a < b ? a : b;
  e.j = a < b ? b : a;
  e.angle = angle_law_.sample(rng_);
  return e;
}

CollisionEvent sample_next_event(CollisionHistory& history, double t_now)
{
  return history.next(t_now);
}

ReplayHistory::ReplayHistory(std::vector<CollisionEvent> events) : events_(std::move(events)) {}

CollisionEvent ReplayHistory::next(double t_now)
{
  if (cursor_ >= events_.size()) {
    throw std::out_of_range("ReplayHistory: recorded history exhausted");
  }
  const CollisionEvent& e = events_[cursor_++];
  if (!(e.time > t_now)) {
    throw std::runtime_error("ReplayHistory: event times are not increasing");
  }
  return e;
}

CollisionEvent RecordingSource::next(double t_now)
{
  events_.push_back(inner_.next(t_now));
  return events_.back();
}

void write_history_csv(std::ostream& out, std::span<const CollisionEvent> events)
{
  CsvWriter csv(out, {"event_index", "time", "i", "j", "theta"});
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& e = events[k];
    csv.cell(k).cell(e.time).cell(e.i).cell(e.j).cell(e.angle);
    csv.end_row();
  }
}

std::vector<CollisionEvent> read_history_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line) || trim(line) != "event_index,time,i,j,theta") {
    throw std::runtime_error("read_history_csv: missing or wrong header");
  }
  std::vector<CollisionEvent> events;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 5) {
      throw std::runtime_error("read_history_csv: expected 5 columns in '" + line + "'");
    }
    CollisionEvent e;
    e.time = parse_double(cells[1]);
    e.i = static_cast<std::size_t>(std::stoull(cells[2]));
    e.j = static_cast<std::size_t>(std::stoull(cells[3]));
    e.angle = parse_double(cells[4]);
    if (e.i >= e.j) {
      throw std::runtime_error("read_history_csv: pair must satisfy i < j in '" + line + "'");
    }
    events.push_back(e);
  }
  return events;
}

} // namespace kacsim
