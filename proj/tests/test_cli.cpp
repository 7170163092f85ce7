#include "kacsim/app/cli.hpp"
#include "kacsim/csv.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

using namespace kacsim::app;
namespace fs = std::filesystem;

namespace {

std::string first_line(const std::string& text)
{
  return text.substr(0, text.find('\n'));
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override
  {
    std::random_device rd;
    root_ = fs::temp_directory_path() / ("kacsim-cli-test-" + std::to_string(rd()));
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int run_plan(Subcommand sub, const std::string& dir, std::vector<std::string> overrides, unsigned threads = 1,
               bool force = false)
  {
    ExperimentPlan plan;
    plan.subcommand = sub;
    plan.output_dir = root_ / dir;
    plan.overrides = std::move(overrides);
    plan.threads = threads;
    plan.force = force;
    out_.str("");
    err_.str("");
    return run(plan, out_, err_);
  }

  std::string read(const std::string& relative) const
  {
    std::ifstream in(root_ / relative, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path root_;
  std::ostringstream out_;
  std::ostringstream err_;
};

} // namespace

TEST_F(CliTest, BoundsPrintsConstants)
{
  ASSERT_EQ(run_plan(Subcommand::bounds, "b", {"u_hat=1", "field=1", "horizon=1"}), exit_ok);
  EXPECT_NE(out_.str().find("delta_t=0.2320667"), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("n=6"), std::string::npos);
  EXPECT_EQ(read("b/bounds.txt"), out_.str());
}

TEST_F(CliTest, SimulateTwiceIsByteIdentical)
{
  const std::vector<std::string> cfg = {"n_particles=32", "replicas=1", "master_seed=17", "t_final=1"};
  ASSERT_EQ(run_plan(Subcommand::simulate, "a", cfg), exit_ok);
  ASSERT_EQ(run_plan(Subcommand::simulate, "b", cfg, 2), exit_ok);
  EXPECT_EQ(read("a/trajectory.csv"), read("b/trajectory.csv"));
  EXPECT_EQ(read("a/manifest.txt"), read("b/manifest.txt"));
  EXPECT_EQ(first_line(read("a/trajectory.csv")), "replica,time,J,U,m2,m4,m6");
}

TEST_F(CliTest, ManifestReproducesTheRun)
{
  ASSERT_EQ(run_plan(Subcommand::simulate, "a", {"n_particles=16", "replicas=3", "process=quenched"}), exit_ok);
  ExperimentPlan plan;
  plan.subcommand = Subcommand::simulate;
  plan.config_path = root_ / "a/manifest.txt";
  plan.output_dir = root_ / "b";
  ASSERT_EQ(run(plan, out_, err_), exit_ok) << err_.str();
  EXPECT_EQ(read("a/trajectory.csv"), read("b/trajectory.csv"));
}

TEST_F(CliTest, CoupleWithoutFieldHasZeroDistance)
{
  ASSERT_EQ(run_plan(Subcommand::couple, "c", {"field_strength=0", "n_particles=20", "replicas=4"}), exit_ok);
  std::istringstream csv(read("c/coupled.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "replica,time,distance_N,J_int,J_quench,U_int,U_quench,Jhat_ode");
  int rows = 0;
  while (std::getline(csv, line)) {
    EXPECT_EQ(kacsim::split(line, ',')[2], "0");
    ++rows;
  }
  EXPECT_EQ(rows, 4 * 11);
}

TEST_F(CliTest, RefusesToOverwriteWithoutForce)
{
  ASSERT_EQ(run_plan(Subcommand::bounds, "d", {}), exit_ok);
  EXPECT_EQ(run_plan(Subcommand::bounds, "d", {"field=2"}), exit_output_error);
  EXPECT_NE(read("d/bounds.txt").find("delta_t=0.2320667"), std::string::npos);
  EXPECT_EQ(run_plan(Subcommand::bounds, "d", {"field=2"}, 1, true), exit_ok);
  EXPECT_NE(read("d/bounds.txt").find("delta_t=0.1160333"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsNameTheKeyAndWriteNothing)
{
  EXPECT_EQ(run_plan(Subcommand::simulate, "e", {"no_such_key=1"}), exit_config_error);
  EXPECT_NE(err_.str().find("no_such_key"), std::string::npos);
  EXPECT_FALSE(fs::exists(root_ / "e"));
  EXPECT_EQ(run_plan(Subcommand::chaos_sweep, "e", {"sweep_n=64,32"}), exit_config_error);
  EXPECT_NE(err_.str().find("sweep_n"), std::string::npos);
  EXPECT_EQ(run_plan(Subcommand::bounds, "e", {"n_particles=3"}), exit_config_error);
  EXPECT_EQ(run_plan(Subcommand::chaos_sweep, "e", {"phi=cube"}), exit_config_error);
  EXPECT_NE(err_.str().find("phi"), std::string::npos);
  // No staging leftovers either.
  EXPECT_TRUE(fs::is_empty(root_));
}

TEST_F(CliTest, ReplicaFailureReportsReplayKey)
{
  EXPECT_EQ(run_plan(Subcommand::simulate, "f",
                     {"initial_distribution=two_point:0:0:0.5", "project_to_sphere=false", "master_seed=5",
                      "replicas=2"}),
            exit_replica_failure);
  EXPECT_NE(err_.str().find("master_seed=5"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(root_ / "f"));
}

TEST_F(CliTest, HistoryDumpReplaysBitExactly)
{
  const std::vector<std::string> cfg = {"n_particles=24", "t_final=2", "master_seed=3", "field_strength=1.5"};
  auto live = cfg;
  live.push_back("dump_history=true");
  ASSERT_EQ(run_plan(Subcommand::simulate, "live", live), exit_ok);
  auto replay = cfg;
  replay.push_back("replay_history=" + (root_ / "live/histories/replica_0.csv").string());
  ASSERT_EQ(run_plan(Subcommand::simulate, "replay", replay), exit_ok) << err_.str();
  EXPECT_EQ(read("live/trajectory.csv"), read("replay/trajectory.csv"));
}

TEST_F(CliTest, SnapshotsHaveOneVelocityPerLine)
{
  ASSERT_EQ(run_plan(Subcommand::simulate, "s",
                     {"n_particles=9", "replicas=2", "snapshots=true", "sample_times=0,0.5", "t_final=0.5"}),
            exit_ok);
  std::istringstream snap(read("s/snapshots/replica_1_sample_1.txt"));
  std::string line;
  int lines = 0;
  while (std::getline(snap, line)) {
    EXPECT_NO_THROW(kacsim::parse_double(line));
    ++lines;
  }
  EXPECT_EQ(lines, 9);
}

TEST_F(CliTest, SweepsWriteTablesAndFits)
{
  ASSERT_EQ(run_plan(Subcommand::coupling_sweep, "cs", {"sweep_n=64,256,1024", "replicas=40"}), exit_ok) << err_.str();
  EXPECT_EQ(first_line(read("cs/scaling.csv")), "N,metric,mean,stderr,replicas");
  EXPECT_EQ(first_line(read("cs/fit.csv")), "metric,slope,intercept,r2");
  const int status = run_plan(Subcommand::chaos_sweep, "ch", {"sweep_n=4,8,16", "replicas=30", "t_final=0.5"});
  EXPECT_TRUE(status == exit_ok || status == exit_check_failed);
  EXPECT_EQ(first_line(read("ch/chaos.csv")), "N,t,phi,psi,defect,stderr");
}

TEST_F(CliTest, LimitCheckWritesComparison)
{
  ASSERT_EQ(run_plan(Subcommand::limit_check, "l", {"n_particles=128", "replicas=50"}), exit_ok);
  EXPECT_EQ(first_line(read("l/limit.csv")), "time,J_mean,J_stderr,zeta,z");
}

TEST(Subcommands, NamesRoundTrip)
{
  for (const auto& n : subcommand_names()) {
    ASSERT_TRUE(parse_subcommand(n).has_value());
    EXPECT_EQ(name(*parse_subcommand(n)), n);
  }
  EXPECT_FALSE(parse_subcommand("simulat").has_value());
}
