#ifndef KACSIM_APP_OUTPUTS_HPP
#define KACSIM_APP_OUTPUTS_HPP

#include "kacsim/app/experiments.hpp"
#include "kacsim/ensemble.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kacsim::app {

class OutputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/**
 * Output directory built under a hidden sibling and renamed into place by
 * commit().  An existing non-empty target is refused unless `force`; the
 * staging directory is removed if commit() is never reached.
 */
class StagedDirectory {
public:
  StagedDirectory(std::filesystem::path target, bool force);
  ~StagedDirectory();

  StagedDirectory(const StagedDirectory&) = delete;
  StagedDirectory& operator=(const StagedDirectory&) = delete;

  const std::filesystem::path& staging() const noexcept { return staging_; }
  const std::filesystem::path& target() const noexcept { return target_; }
  std::filesystem::path path(const std::string& relative) const;

  /// Writes `text` to staging()/relative, creating parent directories.
  void write(const std::string& relative, const std::string& text);
  const std::vector<std::string>& files() const noexcept { return files_; }

  void commit();

private:
  std::filesystem::path target_;
  std::filesystem::path staging_;
  bool force_;
  bool committed_ = false;
  std::vector<std::string> files_;
};

// replica,time,J,U,m2,m4,m6
void write_trajectory_csv(std::ostream& out, const EnsembleResult& result);
// replica,time,distance_N,J_int,J_quench,U_int,U_quench,Jhat_ode
void write_coupled_csv(std::ostream& out, const EnsembleResult& result);
// replica,sup_distance_N
void write_sup_distance_csv(std::ostream& out, const std::vector<double>& sup);
// N,t,phi,psi,defect,stderr
void write_chaos_csv(std::ostream& out, const std::vector<ChaosRow>& rows, TestFunction phi, TestFunction psi);
// metric,slope,intercept,r2
void write_fit_csv(std::ostream& out, const std::vector<std::pair<std::string, RateFit>>& fits);
// time,J_mean,J_stderr,zeta,z
void write_limit_csv(std::ostream& out, const std::vector<LimitRow>& rows);
/// One velocity per line.
std::string snapshot_text(const std::vector<double>& velocities);
std::string snapshot_name(std::size_t replica, std::size_t sample_index);

} // namespace kacsim::app

#endif // KACSIM_APP_OUTPUTS_HPP
