#ifndef KACSIM_DIAGNOSTICS_HPP
#define KACSIM_DIAGNOSTICS_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kacsim {

/// Velocities of every replica at one time; snapshots[r][i] is v_i of replica r.
using SnapshotEnsemble = std::vector<std::vector<double>>;

/// Chaos and fluctuation estimators need at least this many replicas.
inline constexpr std::size_t min_replicas = 30;

/// Sorted sample of velocities with its (replica, time) provenance.
class EmpiricalMeasure {
public:
  /// Throws std::invalid_argument on non-finite values.
  explicit EmpiricalMeasure(std::vector<double> samples, std::size_t replica = 0, double time = 0.0);

  std::span<const double> sorted_samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t replica() const noexcept { return replica_; }
  double time() const noexcept { return time_; }

private:
  std::vector<double> samples_;
  std::size_t replica_;
  double time_;
};

/// Exact W1 between two empirical measures with the same number of atoms:
/// the mean absolute difference of the sorted samples.
double wasserstein1(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Fixed catalog of test functions: bounded, or at most quadratic growth.
enum class TestFunction {
  identity,       // v
  square,         // v^2
  sine,           // sin(v)
  hyperbolic_tan, // tanh(v)
  clipped_square, // min(1, v^2)
};

/// Bumped whenever the catalog changes, so scaling runs stay comparable.
inline constexpr int test_function_catalog_version = 1;

/// Names: v, v2, sin, tanh, min1v2.
TestFunction parse_test_function(std::string_view name);
std::string_view name(TestFunction f) noexcept;
double evaluate(TestFunction f, double v) noexcept;

struct Estimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/**
 * Chaos defect E[phi(v1) psi(v2)] - E[phi(v1)] E[psi(v2)] across replicas.
 *
 * Without symmetrization, (v1, v2) are the first two coordinates of each
 * replica.  With it, the pair term averages over all ordered pairs i != j
 * and the single terms over all coordinates; the target is the same by
 * exchangeability.  std_error is the leave-one-replica-out jackknife.
 */
Estimate chaos_defect(const SnapshotEnsemble& snapshots, TestFunction phi, TestFunction psi, bool symmetrize = false);

/// N * mean over replicas of (J - jhat)^2, with its standard error.
Estimate current_fluctuation(const SnapshotEnsemble& snapshots, double jhat);

/// Structural constants of the pathwise coupling estimate.
struct BoundConstants {
  /// Window over which 1/sqrt(U) at most doubles.
  double delta_t = 0.0;
  /// Smallest integer >= horizon/delta_t + 1.
  long long n_of_t = 0;
  /// Flow-differential growth rate 4E/sqrt(U).
  double lambda_rate = 0.0;
  /// exp(8 T sqrt(2/U)).
  double growth_factor = 0.0;
  double u_hat = 0.0;
  double field = 0.0;
  double horizon = 0.0;
};

/// Throws std::invalid_argument unless u_hat, field and horizon are positive.
BoundConstants theorem_bounds(double u_hat, double field, double horizon);

struct ScalingRow {
  std::size_t n_particles = 0;
  std::string metric;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replicas = 0;
};

/// (N, metric, mean, stderr, replicas) rows; N strictly increasing per metric.
class ScalingTable {
public:
  /// Throws std::invalid_argument if N does not increase or std_error < 0.
  void add(ScalingRow row);

  const std::vector<ScalingRow>& rows() const noexcept { return rows_; }
  std::vector<ScalingRow> rows_for(std::string_view metric) const;

  /// Header: N,metric,mean,stderr,replicas
  void write_csv(std::ostream& out) const;

private:
  std::vector<ScalingRow> rows_;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/**
 * Least squares of log(mean) on log(N) for one metric.
 *
 * Requires at least three N values, positive means and std_error < mean/3
 * for every row; throws std::domain_error otherwise.
 */
RateFit fit_rate(const ScalingTable& table, std::string_view metric);

/// Sample median with a distribution-free standard error from the
/// order statistics bracketing a 95% interval.
Estimate median_estimate(std::vector<double> xs);

} // namespace kacsim

#endif // KACSIM_DIAGNOSTICS_HPP
