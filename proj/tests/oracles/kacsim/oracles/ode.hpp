#ifndef KACSIM_ORACLES_ODE_HPP
#define KACSIM_ORACLES_ODE_HPP

// Brute-force numerical integration of the N-particle equations of motion,
// used to check the closed-form flows.  Nothing here calls into the
// simulator's flow code.

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <vector>

namespace kacsim::oracles {

using State = std::vector<double>;

namespace detail {

inline auto stepper(double tol)
{
  using namespace boost::numeric::odeint;
  return make_controlled(tol, tol, runge_kutta_dopri5<State>());
}

} // namespace detail

/// dV/dt = E (1 - (J(V)/U(V)) V), integrated over [0, dt].
inline State integrate_thermostatted(State v, double field, double dt, double tol = 1e-13)
{
  if (dt <= 0.0) {
    return v;
  }
  const auto rhs = [field](const State& x, State& dxdt, double) {
    const double n = static_cast<double>(x.size());
    double s = 0.0;
    double s2 = 0.0;
    for (const double xi : x) {
      s += xi;
      s2 += xi * xi;
    }
    const double ratio = (s / n) / (s2 / n);
    dxdt.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      dxdt[i] = field * (1.0 - ratio * x[i]);
    }
  };
  boost::numeric::odeint::integrate_adaptive(detail::stepper(tol), rhs, v, 0.0, dt, dt / 64.0);
  return v;
}

/// Current alone: dJ/dt = E - E J^2/U - damping * J over [0, dt].
inline double integrate_current(double u_bar, double field, double damping, double j0, double dt, double tol = 1e-13)
{
  State x{j0};
  if (dt <= 0.0) {
    return j0;
  }
  const auto rhs = [=](const State& y, State& dydt, double) {
    dydt.resize(1);
    dydt[0] = field - field * y[0] * y[0] / u_bar - damping * y[0];
  };
  boost::numeric::odeint::integrate_adaptive(detail::stepper(tol), rhs, x, 0.0, dt, dt / 64.0);
  return x[0];
}

/// Quenched particles between jumps: the current obeys
/// dJ/dt = E - E J^2/U - 2J from J(t0) = j0, and every particle obeys
/// dv/dt = E - (E J(t)/U) v on [s, t].
inline State integrate_quenched(State v, double u_bar, double field, double j0, double t0, double s, double t,
                                double tol = 1e-13)
{
  const double j_s = integrate_current(u_bar, field, 2.0, j0, s - t0, tol);
  if (t <= s) {
    return v;
  }
  State x(v.size() + 1);
  x[0] = j_s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    x[i + 1] = v[i];
  }
  const auto rhs = [=](const State& y, State& dydt, double) {
    dydt.resize(y.size());
    const double j = y[0];
    dydt[0] = field - field * j * j / u_bar - 2.0 * j;
    for (std::size_t i = 1; i < y.size(); ++i) {
      dydt[i] = field - field * j / u_bar * y[i];
    }
  };
  boost::numeric::odeint::integrate_adaptive(detail::stepper(tol), rhs, x, s, t, (t - s) / 64.0);
  return State(x.begin() + 1, x.end());
}

/// Pair covariance Cov(v_1, v_2) of the quenched N-particle process when
/// every replica shares the same current (distributional start), from the
/// moment equations of S = sum v and Q = sum v^2 under flow plus collisions:
///   C' = -(2 gamma + (4N - 6)/(N - 1)) C + 2 J^2/(N - 1),  gamma = E J/U.
inline double quenched_pair_covariance(std::size_t n, double u_bar, double field, double j0, double c0, double t,
                                       double tol = 1e-13)
{
  const double nn = static_cast<double>(n);
  const double rate = (4.0 * nn - 6.0) / (nn - 1.0);
  State x{j0, c0};
  if (t <= 0.0) {
    return c0;
  }
  const auto rhs = [=](const State& y, State& dydt, double) {
    dydt.resize(2);
    const double gamma = field * y[0] / u_bar;
    dydt[0] = field - gamma * y[0] - 2.0 * y[0];
    dydt[1] = -(2.0 * gamma + rate) * y[1] + 2.0 * y[0] * y[0] / (nn - 1.0);
  };
  boost::numeric::odeint::integrate_adaptive(detail::stepper(tol), rhs, x, 0.0, t, t / 64.0);
  return x[1];
}

} // namespace kacsim::oracles

#endif // KACSIM_ORACLES_ODE_HPP
