#include "kacsim/flow.hpp"

#include "kacsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kacsim {

namespace {

// expm1(x)/x, continuous at 0.
double exprel(double x)
{
  if (std::abs(x) < 1e-8) {
    return 1.0 + 0.5 * x;
  }
  return std::expm1(x) / x;
}

// sinh(w tau)/w scaled by e^{-w tau}; tends to tau as w -> 0.
double scaled_sinh_over(double omega, double tau)
{
  if (omega * tau < 1e-300) {
    return tau;
  }
  return -std::expm1(-2.0 * omega * tau) / (2.0 * omega);
}

} // namespace

CurrentSolution::CurrentSolution(CurrentKind kind, double u_bar, double field, double j0, double t0)
  : kind_(kind), u_bar_(u_bar), field_(field), j0_(j0), t0_(t0)
{
  if (!(u_bar > 0.0) || !std::isfinite(u_bar)) {
    throw std::invalid_argument("CurrentSolution: u_bar must be positive");
  }
  if (!(field >= 0.0) || !std::isfinite(field)) {
    throw std::invalid_argument("CurrentSolution: field must be finite and >= 0");
  }
  const double root_u = std::sqrt(u_bar);
  if (!(std::abs(j0) <= root_u * (1.0 + 1e-12))) {
    throw std::invalid_argument("CurrentSolution: |j0| exceeds sqrt(u_bar)");
  }
  j0_ = std::clamp(j0, -root_u, root_u);

  half_b_ = kind == CurrentKind::quenched ? -1.0 : 0.0;
  c_ = -field / u_bar;
  omega_ = std::sqrt(half_b_ * half_b_ + field * field / u_bar);

  if (field > 0.0) {
    if (kind == CurrentKind::interacting) {
      const double j = j0_ / root_u;
      p_ = 0.5 * (1.0 + j);
      q_ = 0.5 * (1.0 - j);
    } else {
      const double k_over_w = (-half_b_ - c_ * j0_) / omega_;
      p_ = 0.5 * (1.0 + k_over_w);
      q_ = 0.5 * (1.0 - k_over_w);
    }
  }
}

void CurrentSolution::check_time(double t) const
{
  if (!(t >= t0_)) {
    throw std::invalid_argument("CurrentSolution: time precedes t0");
  }
}

double CurrentSolution::evaluate(double t) const
{
  check_time(t);
  const double tau = t - t0_;
  const double ch = 0.5 * (1.0 + std::exp(-2.0 * omega_ * tau));
  const double sh = scaled_sinh_over(omega_, tau);
  const double num = j0_ * (ch + half_b_ * sh) + field_ * sh;
  const double den = ch - half_b_ * sh - c_ * j0_ * sh;
  const double root_u = std::sqrt(u_bar_);
  return std::clamp(num / den, -root_u, root_u);
}

AffineFlowCoefficients CurrentSolution::coefficients(double s, double t) const
{
  check_time(s);
  if (!(t >= s)) {
    throw std::invalid_argument("CurrentSolution::coefficients: requires s <= t");
  }
  if (field_ == 0.0) {
    return {1.0, 0.0, s, t};
  }
  const double m_plus = half_b_ + omega_;
  const double m_minus = half_b_ - omega_;
  const double sigma = s - t0_;
  const double tau = t - t0_;
  const double h = t - s;
  const double r_s = std::exp(-2.0 * omega_ * sigma);
  const double r_t = std::exp(-2.0 * omega_ * tau);
  const double den = p_ + q_ * r_t;

  const double alpha = std::exp(-m_plus * h) * (p_ + q_ * r_s) / den;

  // integral_s^t u / u(t), with u(t) factored as e^{m+ t}(p + q r_t).
  const double x = -m_minus * h;
  const double q_term = x < 1.0 ? q_ * r_t * exprel(x)
                                : q_ * std::exp(-2.0 * omega_ * tau + x) * (-std::expm1(-x)) / x;
  const double beta = field_ * h * (p_ * exprel(-m_plus * h) + q_term) / den;
  return {alpha, beta, s, t};
}

double solve_current(CurrentKind kind, double u_bar, double field, double j0, double t0, double t)
{
  return CurrentSolution(kind, u_bar, field, j0, t0).evaluate(t);
}

double quenched_fixed_point(double u_bar, double field)
{
  if (!(u_bar > 0.0)) {
    throw std::invalid_argument("quenched_fixed_point: u_bar must be positive");
  }
  return field / (1.0 + std::sqrt(1.0 + field * field / u_bar));
}

void thermostatted_flow(MasterVector& v, double dt, double field)
{
  if (!(dt >= 0.0)) {
    throw std::invalid_argument("thermostatted_flow: dt must be >= 0");
  }
  if (field == 0.0 || dt == 0.0) {
    return;
  }
  const double u = energy(v);
  if (!(u > 0.0)) {
    throw DegenerateStateError("thermostatted_flow: zero energy, thermostat undefined");
  }
  const double root_u = std::sqrt(u);
  const double j = std::clamp(momentum(v), -root_u, root_u);
  const auto coeffs = CurrentSolution(CurrentKind::interacting, u, field, j, 0.0).coefficients(0.0, dt);
  v.apply_affine(coeffs.alpha, coeffs.beta);
}

AffineFlowCoefficients quenched_coefficients(const CurrentSolution& current, double s, double t)
{
  if (current.kind() != CurrentKind::quenched) {
    throw std::invalid_argument("quenched_coefficients: current must be of quenched kind");
  }
  return current.coefficients(s, t);
}

void quenched_flow(MasterVector& v, const AffineFlowCoefficients& coeffs)
{
  v.apply_affine(coeffs.alpha, coeffs.beta);
}

} // namespace kacsim
