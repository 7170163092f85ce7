#include "kacsim/app/outputs.hpp"

#include "kacsim/csv.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

namespace kacsim::app {

namespace fs = std::filesystem;

namespace {

bool non_empty_directory(const fs::path& p)
{
  std::error_code ec;
  if (!fs::exists(p, ec)) {
    return false;
  }
  if (!fs::is_directory(p, ec)) {
    return true;
  }
  return fs::directory_iterator(p, ec) != fs::directory_iterator();
}

std::string random_suffix()
{
  std::random_device rd;
  std::ostringstream s;
  s << std::hex << rd() << rd();
  return s.str();
}

} // namespace

StagedDirectory::StagedDirectory(fs::path target, bool force) : target_(std::move(target)), force_(force)
{
  if (target_.empty()) {
    throw OutputError("no output directory given");
  }
  if (!target_.has_filename()) {
    target_ = target_.parent_path();
  }
  if (non_empty_directory(target_) && !force_) {
    throw OutputError("output directory " + target_.string() + " exists and is not empty (use --force)");
  }
  const fs::path parent = target_.has_parent_path() ? target_.parent_path() : fs::path(".");
  fs::create_directories(parent);
  staging_ = parent / ("." + target_.filename().string() + ".staging-" + random_suffix());
  fs::create_directory(staging_);
}

StagedDirectory::~StagedDirectory()
{
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

fs::path StagedDirectory::path(const std::string& relative) const
{
  return staging_ / relative;
}

void StagedDirectory::write(const std::string& relative, const std::string& text)
{
  const fs::path p = path(relative);
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    throw OutputError("could not write " + p.string());
  }
  files_.push_back(relative);
}

void StagedDirectory::commit()
{
  std::error_code ec;
  if (fs::exists(target_, ec)) {
    if (non_empty_directory(target_) && !force_) {
      throw OutputError("output directory " + target_.string() + " appeared while running");
    }
    fs::remove_all(target_);
  }
  fs::rename(staging_, target_);
  committed_ = true;
}

void write_trajectory_csv(std::ostream& out, const EnsembleResult& result)
{
  CsvWriter csv(out, {"replica", "time", "J", "U", "m2", "m4", "m6"});
  for (std::size_t r = 0; r < result.trajectories.size(); ++r) {
    for (const auto& s : result.trajectories[r]) {
      csv.cell(r).cell(s.time).cell(s.j_value).cell(s.u_value).cell(s.m2).cell(s.m4).cell(s.m6);
      csv.end_row();
    }
  }
}

void write_coupled_csv(std::ostream& out, const EnsembleResult& result)
{
  CsvWriter csv(out, {"replica", "time", "distance_N", "J_int", "J_quench", "U_int", "U_quench", "Jhat_ode"});
  for (std::size_t r = 0; r < result.coupled.size(); ++r) {
    for (const auto& s : result.coupled[r]) {
      csv.cell(r).cell(s.time).cell(s.distance_n).cell(s.j_interacting).cell(s.j_quenched);
      csv.cell(s.u_interacting).cell(s.u_quenched).cell(s.jhat_ode);
      csv.end_row();
    }
  }
}

void write_sup_distance_csv(std::ostream& out, const std::vector<double>& sup)
{
  CsvWriter csv(out, {"replica", "sup_distance_N"});
  for (std::size_t r = 0; r < sup.size(); ++r) {
    csv.cell(r).cell(sup[r]);
    csv.end_row();
  }
}

void write_chaos_csv(std::ostream& out, const std::vector<ChaosRow>& rows, TestFunction phi, TestFunction psi)
{
  CsvWriter csv(out, {"N", "t", "phi", "psi", "defect", "stderr"});
  for (const auto& row : rows) {
    csv.cell(row.n_particles).cell(row.time).cell(name(phi)).cell(name(psi));
    csv.cell(row.defect.estimate).cell(row.defect.std_error);
    csv.end_row();
  }
}

void write_fit_csv(std::ostream& out, const std::vector<std::pair<std::string, RateFit>>& fits)
{
  CsvWriter csv(out, {"metric", "slope", "intercept", "r2"});
  for (const auto& [metric, fit] : fits) {
    csv.cell(metric).cell(fit.slope).cell(fit.intercept).cell(fit.r2);
    csv.end_row();
  }
}

void write_limit_csv(std::ostream& out, const std::vector<LimitRow>& rows)
{
  CsvWriter csv(out, {"time", "J_mean", "J_stderr", "zeta", "z"});
  for (const auto& row : rows) {
    const double z = row.j.std_error > 0.0 ? (row.j.mean - row.zeta) / row.j.std_error : 0.0;
    csv.cell(row.time).cell(row.j.mean).cell(row.j.std_error).cell(row.zeta).cell(z);
    csv.end_row();
  }
}

std::string snapshot_text(const std::vector<double>& velocities)
{
  std::string text;
  for (const double v : velocities) {
    text += format_double(v);
    text += '\n';
  }
  return text;
}

std::string snapshot_name(std::size_t replica, std::size_t sample_index)
{
  return "snapshots/replica_" + std::to_string(replica) + "_sample_" + std::to_string(sample_index) + ".txt";
}

} // namespace kacsim::app
