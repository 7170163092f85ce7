#include "kacsim/master_vector.hpp"

#include <cmath>
#include <stdexcept>

namespace kacsim {

namespace {

// Bounds on the pending scale before it is folded into storage.
constexpr double min_scale = 0x1.0p-8;
constexpr double max_scale = 0x1.0p+8;

} // namespace

MasterVector::MasterVector(std::vector<double> velocities, bool lazy)
  : stored_(std::move(velocities)), lazy_(lazy)
{
  refresh_caches();
}

std::vector<double> MasterVector::values() const
{
  std::vector<double> out(stored_.size());
  for (std::size_t i = 0; i < stored_.size(); ++i) {
    out[i] = scale_ * stored_[i] + offset_;
  }
  return out;
}

void MasterVector::set_pair_preserving_norm(std::size_t i, std::size_t j, double vi, double vj)
{
  const double old_pair = (*this)[i] + (*this)[j];
  stored_[i] = (vi - offset_) / scale_;
  stored_[j] = (vj - offset_) / scale_;
  sum_ += (vi + vj) - old_pair;
  count_event();
}

void MasterVector::apply_affine(double alpha, double beta)
{
  const double n = static_cast<double>(stored_.size());
  sum_sq_ = alpha * alpha * sum_sq_ + 2.0 * alpha * beta * sum_ + n * beta * beta;
  sum_ = alpha * sum_ + n * beta;
  scale_ *= alpha;
  offset_ = alpha * offset_ + beta;
  if (!lazy_ || scale_ < min_scale || scale_ > max_scale) {
    materialize();
  }
  count_event();
}

void MasterVector::materialize()
{
  if (scale_ == 1.0 && offset_ == 0.0) {
    return;
  }
  for (double& w : stored_) {
    w = scale_ * w + offset_;
  }
  scale_ = 1.0;
  offset_ = 0.0;
}

void MasterVector::refresh_caches()
{
  double s = 0.0;
  double s2 = 0.0;
  for (const double w : stored_) {
    const double v = scale_ * w + offset_;
    s += v;
    s2 += v * v;
  }
  sum_ = s;
  sum_sq_ = s2;
  events_since_refresh_ = 0;
}

void MasterVector::count_event()
{
  if (++events_since_refresh_ >= refresh_interval) {
    materialize();
    refresh_caches();
  }
}

double momentum(const MasterVector& v) noexcept
{
  return v.sum() / static_cast<double>(v.size());
}

double energy(const MasterVector& v) noexcept
{
  return v.sum_sq() / static_cast<double>(v.size());
}

double moment(const MasterVector& v, int p)
{
  if (p != 2 && p != 4 && p != 6) {
    throw std::invalid_argument("moment: order must be 2, 4 or 6");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x2 = v[i] * v[i];
    acc += p == 2 ? x2 : (p == 4 ? x2 * x2 : x2 * x2 * x2);
  }
  return acc / static_cast<double>(v.size());
}

Observables observe(std::span<const double> velocities) noexcept
{
  Observables o;
  for (const double x : velocities) {
    const double x2 = x * x;
    o.j += x;
    o.m2 += x2;
    o.m4 += x2 * x2;
    o.m6 += x2 * x2 * x2;
  }
  const double n = static_cast<double>(velocities.size());
  o.j /= n;
  o.m2 /= n;
  o.m4 /= n;
  o.m6 /= n;
  o.u = o.m2;
  return o;
}

Observables observe(const MasterVector& v)
{
  const auto values = v.values();
  return observe(values);
}

} // namespace kacsim
