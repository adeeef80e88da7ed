// Copyright 2026 The littlebig Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "littlebig/metrics.hpp"
#include "littlebig/workload.hpp"

namespace littlebig::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "littlebig");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("littlebig_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string small_queue() {
    const auto p = path("q.json");
    const auto r = invoke({"gen-workload", "--count", "12", "--duration-min", "10",
                           "--duration-max", "40", "--out", p});
    EXPECT_EQ(r.code, kOk) << r.err;
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, GenWorkloadDefaultsCycleNinePresets) {
  const auto p = path("q90.json");
  const auto r = invoke({"gen-workload", "--preset", "parsec", "--count", "90", "--overestimate",
                         "0.5", "--seed", "42", "--out", p});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto jobs = load_jobs(p);
  ASSERT_EQ(jobs.size(), 90u);
  EXPECT_EQ(jobs[0].id.rfind("blackscholes", 0), 0u);
  EXPECT_EQ(jobs[8].id.rfind("dgemm", 0), 0u);
  EXPECT_EQ(jobs[9].id.rfind("blackscholes", 0), 0u);
}

TEST_F(CliTest, GenWorkloadUnknownPresetListsChoices) {
  const auto r = invoke({"gen-workload", "--preset", "nosuch"});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("canneal"), std::string::npos) << r.err;
}

TEST_F(CliTest, GenWorkloadZeroOverestimateMatchesPeak) {
  const auto p = path("exact.json");
  ASSERT_EQ(invoke({"gen-workload", "--count", "9", "--overestimate", "0", "--out", p}).code, kOk);
  for (const auto& j : load_jobs(p)) EXPECT_EQ(j.requested, j.trace.peak());
}

TEST_F(CliTest, SimulateWritesReportDeterministically) {
  const auto q = small_queue();
  const auto a = path("a.json");
  const auto b = path("b.json");
  for (const auto& out : {a, b}) {
    const auto r = invoke({"simulate", "--mode", "coscheduled", "--ratio", "1:3", "--jobs", q,
                           "--seed", "7", "--out", out});
    ASSERT_EQ(r.code, kOk) << r.err;
  }
  EXPECT_EQ(read_file(a), read_file(b));
  const auto report = load_report(a);
  EXPECT_EQ(report.config.little_nodes, 1);
  EXPECT_EQ(report.config.big_nodes, 3);
  EXPECT_EQ(report.job_count, 12u);
}

TEST_F(CliTest, SimulateBadRatioIsConfigError) {
  const auto q = small_queue();
  EXPECT_EQ(invoke({"simulate", "--ratio", "0:5", "--jobs", q}).code, kConfigError);
  EXPECT_EQ(invoke({"simulate", "--mode", "sideways", "--jobs", q}).code, kConfigError);
}

TEST_F(CliTest, SimulateMissingJobsFileIsInputError) {
  EXPECT_EQ(invoke({"simulate", "--jobs", path("absent.json")}).code, kInputError);
}

TEST_F(CliTest, MissingRequiredFlagIsUsageError) {
  EXPECT_EQ(invoke({"simulate"}).code, kConfigError);
  EXPECT_EQ(invoke({}).code, kConfigError);
}

TEST_F(CliTest, ConfigFileFlagsAndEnvironmentLayer) {
  const auto q = small_queue();
  const auto cfg = path("c.json");
  write_file_atomic(cfg, "// comment\n{\"mode\": \"exclusive\", \"little_nodes\": 1, \"big_nodes\": 2, \"seed\": 5}\n");

  ASSERT_EQ(invoke({"simulate", "--config", cfg, "--jobs", q, "--out", path("r1.json")}).code, kOk);
  auto r = load_report(path("r1.json"));
  EXPECT_EQ(r.config.mode, RunMode::ExclusiveAccess);
  EXPECT_EQ(r.config.big_nodes, 2);

  ASSERT_EQ(invoke({"simulate", "--config", cfg, "--big-nodes", "4", "--jobs", q, "--out",
                    path("r2.json")}).code, kOk);
  EXPECT_EQ(load_report(path("r2.json")).config.big_nodes, 4);

  ::setenv("LITTLEBIG_BIG_NODES", "3", 1);
  const auto env = invoke({"simulate", "--config", cfg, "--jobs", q, "--out", path("r3.json")});
  const auto flag = invoke({"simulate", "--config", cfg, "--big-nodes", "5", "--jobs", q, "--out",
                            path("r4.json")});
  ::unsetenv("LITTLEBIG_BIG_NODES");
  ASSERT_EQ(env.code, kOk) << env.err;
  ASSERT_EQ(flag.code, kOk) << flag.err;
  EXPECT_EQ(load_report(path("r3.json")).config.big_nodes, 3);
  EXPECT_EQ(load_report(path("r4.json")).config.big_nodes, 5);
}

TEST_F(CliTest, ConfigFileUnknownKeyRejected) {
  const auto q = small_queue();
  const auto cfg = path("c.json");
  write_file_atomic(cfg, "{\"bigg_nodes\": 2}");
  const auto r = invoke({"simulate", "--config", cfg, "--jobs", q});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("bigg_nodes"), std::string::npos);
  EXPECT_EQ(invoke({"simulate", "--config", path("none.json"), "--jobs", q}).code, kConfigError);
}

TEST_F(CliTest, SweepWritesEveryRunAndPlot) {
  const auto q = small_queue();
  const auto out = path("sweep");
  const auto r = invoke({"sweep", "--ratios", "1:2..1:12:2", "--jobs", q, "--out-dir", out,
                         "--parallel", "4"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  std::size_t reports = 0;
  for (const auto& f : fs::directory_iterator(out)) reports += f.path().extension() == ".json";
  EXPECT_EQ(reports, 18u);
  EXPECT_TRUE(fs::exists(fs::path(out) / "plot.csv"));
  EXPECT_FALSE(fs::exists(fs::path(out) / "INCOMPLETE"));
  EXPECT_TRUE(fs::exists(fs::path(out) / "run_1-6_coscheduled.json"));
}

TEST_F(CliTest, SweepFailureLeavesIncompleteMarker) {
  const auto q = small_queue();
  const auto out = path("sweep");
  // max_ticks=1 aborts the run before the queue drains.
  const auto cfg = path("c.json");
  write_file_atomic(cfg, "{\"max_ticks\": 1}");
  const auto r = invoke({"sweep", "--config", cfg, "--ratios", "1:2", "--modes", "coscheduled",
                         "--jobs", q, "--out-dir", out});
  EXPECT_NE(r.code, kOk);
  EXPECT_TRUE(fs::exists(fs::path(out) / "INCOMPLETE"));
  EXPECT_FALSE(fs::exists(fs::path(out) / "plot.csv"));
}

TEST_F(CliTest, SweepEmptyRatioListRejected) {
  const auto q = small_queue();
  EXPECT_EQ(invoke({"sweep", "--ratios", ",", "--jobs", q, "--out-dir", path("s")}).code,
            kConfigError);
}

TEST_F(CliTest, EstimateConstantTrace) {
  const auto t = path("t.csv");
  save_trace(t, UsageTrace{std::vector<ResourceVector>(20, {2, 1000})});
  const auto r = invoke({"estimate", "--trace", t});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("\"optimal\": 2.0"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"optimal\": 1000.0"), std::string::npos) << r.out;
  EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, EstimateNeverStableWarnsButSucceeds) {
  std::vector<ResourceVector> s;
  for (int i = 0; i < 4; ++i) {
    for (double m : {10.0, 100.0, 20.0, 90.0, 55.0}) s.push_back({1, m});
  }
  const auto t = path("t.csv");
  save_trace(t, UsageTrace{s});
  const auto r = invoke({"estimate", "--trace", t, "--max-windows", "3"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.err.find("did not converge"), std::string::npos);
  EXPECT_NE(r.out.find("\"converged\": false"), std::string::npos);
}

TEST_F(CliTest, EstimateParseErrorReportsLine) {
  const auto t = path("bad.csv");
  write_file_atomic(t, "time_s,cpu_cores,mem_mb\n0,1,100\n1,1,-5\n");
  const auto r = invoke({"estimate", "--trace", t});
  EXPECT_EQ(r.code, kInputError);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_EQ(invoke({"estimate", "--trace", path("absent.csv")}).code, kInputError);
}

TEST_F(CliTest, HelpDocumentsFileFormats) {
  for (const std::string cmd : {"simulate", "sweep", "estimate", "gen-workload"}) {
    const auto r = invoke({cmd, "--help"});
    EXPECT_EQ(r.code, kOk);
    EXPECT_NE(r.out.find("format_version"), std::string::npos) << cmd;
  }
}

TEST(CliBinary, ExitCodeOfInstalledTool) {
  const std::string cmd = std::string(LITTLEBIG_CLI_PATH) + " simulate --ratio 0:5 --jobs x >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), kConfigError);
}

}  // namespace
}  // namespace littlebig::cli
