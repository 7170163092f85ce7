#include "kacsim/diagnostics.hpp"

#include "kacsim/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace kacsim {

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> samples, std::size_t replica, double time)
  : samples_(std::move(samples)), replica_(replica), time_(time)
{
  for (const double x : samples_) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("EmpiricalMeasure: non-finite sample");
    }
  }
  std::sort(samples_.begin(), samples_.end());
}

double wasserstein1(const EmpiricalMeasure& a, const EmpiricalMeasure& b)
{
  if (a.size() != b.size()) {
    throw std::invalid_argument("wasserstein1: measures must have the same number of atoms");
  }
  if (a.size() == 0) {
    return 0.0;
  }
  const auto xs = a.sorted_samples();
  const auto ys = b.sorted_samples();
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    total += std::abs(xs[i] - ys[i]);
  }
  return total / static_cast<double>(xs.size());
}

TestFunction parse_test_function(std::string_view name)
{
  if (name == "v") {
    return TestFunction::identity;
  }
  if (name == "v2") {
    return TestFunction::square;
  }
  if (name == "sin") {
    return TestFunction::sine;
  }
  if (name == "tanh") {
    return TestFunction::hyperbolic_tan;
  }
  if (name == "min1v2") {
    return TestFunction::clipped_square;
  }
  throw std::invalid_argument("unknown test function '" + std::string(name) + "' (catalog: v, v2, sin, tanh, min1v2)");
}

std::string_view name(TestFunction f) noexcept
{
  switch (f) {
  case TestFunction::identity:
    return "v";
  case TestFunction::square:
    return "v2";
  case TestFunction::sine:
    return "sin";
  case TestFunction::hyperbolic_tan:
    return "tanh";
  case TestFunction::clipped_square:
    return "min1v2";
  }
  return "?";
}

double evaluate(TestFunction f, double v) noexcept
{
  switch (f) {
  case TestFunction::identity:
    return v;
  case TestFunction::square:
    return v * v;
  case TestFunction::sine:
    return std::sin(v);
  case TestFunction::hyperbolic_tan:
    return std::tanh(v);
  case TestFunction::clipped_square:
    return std::min(1.0, v * v);
  }
  return 0.0;
}

namespace {

void require_replicas(const SnapshotEnsemble& snapshots)
{
  if (snapshots.size() < min_replicas) {
    throw std::invalid_argument("need at least " + std::to_string(min_replicas) + " replicas, got " +
                                std::to_string(snapshots.size()));
  }
  const std::size_t n = snapshots.front().size();
  if (n < 2) {
    throw std::invalid_argument("snapshots need at least 2 particles");
  }
  for (const auto& s : snapshots) {
    if (s.size() != n) {
      throw std::invalid_argument("snapshots have different particle counts");
    }
  }
}

// mean(z) - mean(x) mean(y) with its leave-one-out jackknife error.
Estimate jackknife_covariance(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z)
{
  const double r = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sz += z[k];
  }
  Estimate e;
  e.estimate = sz / r - (sx / r) * (sy / r);

  std::vector<double> loo(x.size());
  double loo_mean = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double mx = (sx - x[k]) / (r - 1.0);
    const double my = (sy - y[k]) / (r - 1.0);
    const double mz = (sz - z[k]) / (r - 1.0);
    loo[k] = mz - mx * my;
    loo_mean += loo[k];
  }
  loo_mean /= r;
  double ss = 0.0;
  for (const double t : loo) {
    ss += (t - loo_mean) * (t - loo_mean);
  }
  e.std_error = std::sqrt((r - 1.0) / r * ss);
  return e;
}

} // namespace

Estimate chaos_defect(const SnapshotEnsemble& snapshots, TestFunction phi, TestFunction psi, bool symmetrize)
{
  require_replicas(snapshots);
  const std::size_t replicas = snapshots.size();
  std::vector<double> x(replicas);
  std::vector<double> y(replicas);
  std::vector<double> z(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    const auto& v = snapshots[r];
    if (!symmetrize) {
      x[r] = evaluate(phi, v[0]);
      y[r] = evaluate(psi, v[1]);
      z[r] = x[r] * y[r];
      continue;
    }
    double s_phi = 0.0;
    double s_psi = 0.0;
    double s_both = 0.0;
    for (const double vi : v) {
      const double a = evaluate(phi, vi);
      const double b = evaluate(psi, vi);
      s_phi += a;
      s_psi += b;
      s_both += a * b;
    }
    const double n = static_cast<double>(v.size());
    x[r] = s_phi / n;
    y[r] = s_psi / n;
    z[r] = (s_phi * s_psi - s_both) / (n * (n - 1.0));
  }
  return jackknife_covariance(x, y, z);
}

Estimate current_fluctuation(const SnapshotEnsemble& snapshots, double jhat)
{
  require_replicas(snapshots);
  const double n = static_cast<double>(snapshots.front().size());
  std::vector<double> d;
  d.reserve(snapshots.size());
  for (const auto& v : snapshots) {
    double sum = 0.0;
    for (const double vi : v) {
      sum += vi;
    }
    const double dev = sum / n - jhat;
    d.push_back(n * dev * dev);
  }
  const double r = static_cast<double>(d.size());
  double mean = 0.0;
  for (const double t : d) {
    mean += t;
  }
  mean /= r;
  double ss = 0.0;
  for (const double t : d) {
    ss += (t - mean) * (t - mean);
  }
  return {mean, std::sqrt(ss / (r - 1.0) / r)};
}

BoundConstants theorem_bounds(double u_hat, double field, double horizon)
{
  if (!(u_hat > 0.0) || !(field > 0.0) || !(horizon > 0.0)) {
    throw std::invalid_argument("theorem_bounds: u_hat, field and horizon must be positive");
  }
  const double root2 = std::sqrt(2.0);
  BoundConstants b;
  b.u_hat = u_hat;
  b.field = field;
  b.horizon = horizon;
  b.delta_t = std::sqrt(u_hat) / field * std::log((2.0 + 2.0 * root2) / (1.0 + 2.0 * root2));
  b.n_of_t = static_cast<long long>(std::ceil(horizon / b.delta_t + 1.0));
  b.lambda_rate = 4.0 * field / std::sqrt(u_hat);
  b.growth_factor = std::exp(8.0 * horizon * std::sqrt(2.0 / u_hat));
  return b;
}

void ScalingTable::add(ScalingRow row)
{
  if (!(row.std_error >= 0.0)) {
    throw std::invalid_argument("ScalingTable: std_error must be >= 0");
  }
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
    if (it->metric == row.metric) {
      if (!(row.n_particles > it->n_particles)) {
        throw std::invalid_argument("ScalingTable: N must increase within metric '" + row.metric + "'");
      }
      break;
    }
  }
  rows_.push_back(std::move(row));
}

std::vector<ScalingRow> ScalingTable::rows_for(std::string_view metric) const
{
  std::vector<ScalingRow> out;
  for (const auto& row : rows_) {
    if (row.metric == metric) {
      out.push_back(row);
    }
  }
  return out;
}

void ScalingTable::write_csv(std::ostream& out) const
{
  CsvWriter csv(out, {"N", "metric", "mean", "stderr", "replicas"});
  for (const auto& row : rows_) {
    csv.cell(row.n_particles).cell(row.metric).cell(row.mean).cell(row.std_error).cell(row.replicas);
    csv.end_row();
  }
}

RateFit fit_rate(const ScalingTable& table, std::string_view metric)
{
  const auto rows = table.rows_for(metric);
  if (rows.size() < 3) {
    throw std::domain_error("fit_rate: need at least 3 N values for metric '" + std::string(metric) + "'");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : rows) {
    if (!(row.mean > 0.0)) {
      throw std::domain_error("fit_rate: nonpositive mean at N=" + std::to_string(row.n_particles));
    }
    if (!(row.std_error < row.mean / 3.0)) {
      throw std::domain_error("fit_rate: stderr >= mean/3 at N=" + std::to_string(row.n_particles) +
                              " (mean " + format_double(row.mean) + ", stderr " + format_double(row.std_error) +
                              ")");
    }
    xs.push_back(std::log(static_cast<double>(row.n_particles)));
    ys.push_back(std::log(row.mean));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double res = ys[k] - (fit.intercept + fit.slope * xs[k]);
    ss_res += res * res;
  }
  // A flat series is fit exactly by slope 0.
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

Estimate median_estimate(std::vector<double> xs)
{
  if (xs.empty()) {
    throw std::invalid_argument("median_estimate: empty sample");
  }
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  Estimate e;
  e.estimate = n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
  if (n < 3) {
    return e;
  }
  constexpr double z = 1.959963984540054;
  const double half_width = z * std::sqrt(static_cast<double>(n)) / 2.0;
  const double centre = static_cast<double>(n) / 2.0;
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(centre - half_width)));
  const auto hi = static_cast<std::size_t>(std::min(static_cast<double>(n - 1), std::ceil(centre + half_width)));
  e.std_error = (xs[hi] - xs[lo]) / (2.0 * z);
  return e;
}

} // namespace kacsim
