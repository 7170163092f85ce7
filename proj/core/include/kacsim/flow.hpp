#ifndef KACSIM_FLOW_HPP
#define KACSIM_FLOW_HPP

#include "kacsim/master_vector.hpp"

namespace kacsim {

/// interacting: dJ/dt = E - E J^2/U (thermostatted flow between jumps).
/// quenched:    dJ/dt = E - E J^2/U - 2J (mean current of the quenched process,
///              also the first-moment equation of the limit kinetic equation).
enum class CurrentKind { interacting, quenched };

/// v(t) = alpha * v(s) + beta, the same map for every particle.
struct AffineFlowCoefficients {
  double alpha = 1.0;
  double beta = 0.0;
  double s = 0.0;
  double t = 0.0;

  double apply(double v) const noexcept { return alpha * v + beta; }

  /// The map over [first.s, t]: `first` followed by *this.
  AffineFlowCoefficients after(const AffineFlowCoefficients& first) const noexcept
  {
    return {alpha * first.alpha, alpha * first.beta + beta, first.s, t};
  }
};

/**
 * Closed-form solution of the constant-coefficient Riccati equation for the
 * current, started at J(t0) = j0.
 *
 * Writing the equation as J' = a + bJ + cJ^2 and J = -u'/(c u) turns it into
 * a linear second-order equation for u.  Its solution gives J(t) directly,
 * alpha(s, t) = u(s)/u(t) for the per-particle damping gamma = E J / U, and
 * beta(s, t) = E * integral_s^t u / u(t).  No quadrature or time stepping is
 * involved, and E = 0 needs no special branch in evaluate().
 */
class CurrentSolution {
public:
  /// Throws std::invalid_argument if u_bar <= 0, field < 0 or |j0| > sqrt(u_bar)
  /// (beyond 1e-12 relative slack; inside the slack j0 is clamped).
  CurrentSolution(CurrentKind kind, double u_bar, double field, double j0, double t0 = 0.0);

  /// J(t) for t >= t0.
  double evaluate(double t) const;

  /// Affine coefficients of dv/dt = E - (E J(t)/U) v over [s, t], t0 <= s <= t.
  AffineFlowCoefficients coefficients(double s, double t) const;

  CurrentKind kind() const noexcept { return kind_; }
  double u_bar() const noexcept { return u_bar_; }
  double field() const noexcept { return field_; }
  double j0() const noexcept { return j0_; }
  double t0() const noexcept { return t0_; }

private:
  void check_time(double t) const;

  CurrentKind kind_;
  double u_bar_;
  double field_;
  double j0_;
  double t0_;
  double half_b_;  // b/2: 0 or -1
  double c_;       // -E/U
  double omega_;   // sqrt(b^2/4 - a c)
  double p_ = 0.0; // u(tau) = p e^{m+ tau} + q e^{m- tau}
  double q_ = 0.0;
};

/// J(t) from J(t0) = j0; see CurrentSolution.
double solve_current(CurrentKind kind, double u_bar, double field, double j0, double t0, double t);

/// Stable positive fixed point of the quenched current, E/(1 + sqrt(1 + E^2/U)).
double quenched_fixed_point(double u_bar, double field);

/// Advances V by the exact thermostatted flow dV/dt = E(1 - (J/U) V) over dt.
/// Throws DegenerateStateError when field > 0 and energy(v) == 0.
void thermostatted_flow(MasterVector& v, double dt, double field);

/// Coefficients for the quenched flow; `current` must be CurrentKind::quenched.
AffineFlowCoefficients quenched_coefficients(const CurrentSolution& current, double s, double t);

/// v_i <- alpha v_i + beta.
void quenched_flow(MasterVector& v, const AffineFlowCoefficients& coeffs);

} // namespace kacsim

#endif // KACSIM_FLOW_HPP
