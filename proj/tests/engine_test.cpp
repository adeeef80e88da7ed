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
#include "littlebig/engine.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "littlebig/error.hpp"
#include "littlebig/random.hpp"
#include "littlebig/workload.hpp"

namespace littlebig {
namespace {

using testing::constant_job;

ClusterConfig config(RunMode mode, int little, int big) {
  ClusterConfig c;
  c.mode = mode;
  c.little_nodes = little;
  c.big_nodes = big;
  c.check_invariants = true;
  return c;
}

TEST(Run, DefaultSingleJob) {
  std::vector<JobSpec> jobs{constant_job("a", {2, 4000}, {2, 4000}, 10)};
  const auto out = run(config(RunMode::Default, 0, 1), jobs);
  EXPECT_EQ(out.makespan, 10);
  ASSERT_EQ(out.aggregate.size(), 10u);
  EXPECT_DOUBLE_EQ(out.aggregate[0].used.cpu / out.big_capacity.cpu, 0.25);
  EXPECT_EQ(out.jobs[0].status, JobStatus::Completed);
  EXPECT_EQ(out.jobs[0].start, 0);
  EXPECT_EQ(out.jobs[0].finish, 10);
  EXPECT_FALSE(out.jobs[0].profiled);
  EXPECT_EQ(out.profiling_wall_ticks, 0);
}

TEST(Run, ExclusiveProfilesThenRunsWithEstimate) {
  std::vector<JobSpec> jobs{constant_job("a", {4, 8000}, {2, 4000}, 10)};
  const auto out = run(config(RunMode::ExclusiveAccess, 1, 1), jobs);
  EXPECT_EQ(out.makespan, 15);
  EXPECT_EQ(out.profiling_wall_ticks, 5);
  EXPECT_EQ(out.makespan_excluding_profiling(), 10);
  const auto& j = out.jobs[0];
  EXPECT_TRUE(j.profiled);
  EXPECT_EQ(j.allocation, (ResourceVector{2, 4000}));
  EXPECT_EQ(j.enqueued_at, 5);
  EXPECT_EQ(j.start, 5);
  EXPECT_EQ(j.status, JobStatus::Completed);
}

TEST(Run, OverestimatedRequestsPackTighterAfterProfiling) {
  // Four jobs asking for 4 cores that use 2: Default fits two at a time.
  std::vector<JobSpec> jobs;
  for (int i = 0; i < 4; ++i) jobs.push_back(constant_job("j" + std::to_string(i), {4, 100}, {2, 100}, 50));
  const auto def = run(config(RunMode::Default, 0, 1), jobs);
  const auto co = run(config(RunMode::CoScheduled, 1, 1), jobs);
  EXPECT_EQ(def.makespan, 100);
  EXPECT_LT(co.makespan, def.makespan);
}

TEST(Run, SpikeKillsThenRetriesWithOriginalRequest) {
  std::vector<ResourceVector> s(20, {1, 1000});
  s[12] = {1, 1400};
  std::vector<JobSpec> jobs{testing::traced_job("spiky", {2, 2000}, s)};
  auto c = config(RunMode::ExclusiveAccess, 1, 1);
  const auto out = run(c, jobs);
  const auto& j = out.jobs[0];
  EXPECT_EQ(out.kills, 1u);
  EXPECT_EQ(out.retries, 1u);
  EXPECT_TRUE(j.retried);
  EXPECT_EQ(j.status, JobStatus::Completed);
  EXPECT_EQ(j.allocation, (ResourceVector{2, 2000}));

  c.kill_policy = KillPolicy::Fail;
  const auto failed = run(c, jobs);
  EXPECT_EQ(failed.jobs[0].status, JobStatus::Killed);
  EXPECT_EQ(failed.retries, 0u);
}

TEST(Run, UnschedulableJobIsReported) {
  std::vector<JobSpec> jobs{constant_job("big", {9, 100}, {9, 100}, 10),
                            constant_job("ok", {1, 100}, {1, 100}, 10)};
  const auto out = run(config(RunMode::Default, 0, 2), jobs);
  EXPECT_EQ(out.unschedulable, 1u);
  EXPECT_EQ(out.jobs[0].status, JobStatus::Unschedulable);
  EXPECT_EQ(out.jobs[1].status, JobStatus::Completed);
}

TEST(Run, EmptyJobListRejected) {
  EXPECT_THROW(run(config(RunMode::CoScheduled, 1, 1), std::vector<JobSpec>{}), InvalidInput);
}

TEST(Run, RejectsBadConfigBeforeSimulating) {
  std::vector<JobSpec> jobs{constant_job("a", {1, 1}, {1, 1}, 10)};
  EXPECT_THROW(run(config(RunMode::ExclusiveAccess, 0, 1), jobs), ConfigError);
  EXPECT_THROW(run(config(RunMode::Default, 0, 0), jobs), ConfigError);
  auto c = config(RunMode::Default, 0, 1);
  c.node_capacity = {-1, 100};
  EXPECT_THROW(run(c, jobs), ConfigError);
}

TEST(Run, RejectsBadJobs) {
  auto bad = constant_job("a", {1, 1}, {1, 1}, 10);
  bad.duration_s = 12;
  std::vector<JobSpec> jobs{bad};
  EXPECT_THROW(run(config(RunMode::Default, 0, 1), jobs), InvalidInput);
}

WorkloadSpec small_noisy(std::uint64_t seed) {
  WorkloadSpec w;
  w.count = 25;
  w.duration_min_s = 10;
  w.duration_max_s = 60;
  w.shape = TraceShape::Spiky;
  w.seed = seed;
  return w;
}

TEST(Run, DeterministicForIdenticalInputs) {
  const auto jobs = generate(small_noisy(3));
  for (auto mode : {RunMode::Default, RunMode::ExclusiveAccess, RunMode::CoScheduled}) {
    const auto c = config(mode, mode == RunMode::Default ? 0 : 1, 3);
    EXPECT_EQ(run(c, jobs), run(c, jobs));
  }
}

TEST(Run, PoissonArrivalsAreSeeded) {
  const auto jobs = generate(small_noisy(4));
  auto c = config(RunMode::Default, 0, 2);
  c.arrival_rate = 0.2;
  c.seed = 9;
  const auto a = run(c, jobs);
  EXPECT_EQ(a, run(c, jobs));
  Tick last = 0;
  for (const auto& j : a.jobs) {
    EXPECT_GE(j.arrival, last);
    last = j.arrival;
    if (j.start >= 0) EXPECT_GE(j.start, j.arrival);
  }
  c.seed = 10;
  EXPECT_NE(a.jobs, run(c, jobs).jobs);
}

// Every completed job replays its whole trace; every job reaches a terminal
// state; usage never exceeds allocation or capacity.
TEST(Run, ConservesWorkAndCapacity) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto jobs = generate(small_noisy(seed));
    for (auto mode : {RunMode::Default, RunMode::ExclusiveAccess, RunMode::CoScheduled}) {
      const auto out = run(config(mode, mode == RunMode::Default ? 0 : 1, 2), jobs);
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& r = out.jobs[i];
        EXPECT_TRUE(r.status == JobStatus::Completed || r.status == JobStatus::Killed ||
                    r.status == JobStatus::Unschedulable);
        if (r.status == JobStatus::Completed) {
          EXPECT_EQ(r.completed_running_ticks, jobs[i].duration_s);
          EXPECT_EQ(r.finish - r.start, jobs[i].duration_s);
        }
        EXPECT_LE(r.finish, out.makespan);
      }
      for (const auto& u : out.aggregate) {
        EXPECT_TRUE(fits_within(u.used, u.allocated));
        EXPECT_TRUE(fits_within(u.allocated, out.big_capacity * (1 + 1e-12)));
      }
    }
  }
}

TEST(Run, ObserverSeesEveryTick) {
  const auto jobs = generate(small_noisy(5));
  Tick ticks = 0;
  Tick last = -1;
  const auto out = run(config(RunMode::CoScheduled, 1, 2), jobs, [&](const TickSnapshot& s) {
    EXPECT_EQ(s.now, last + 1);
    last = s.now;
    ++ticks;
    for (std::size_t n = 0; n < s.little_reserved.size(); ++n) {
      EXPECT_TRUE(fits_within(s.little_reserved[n], s.little_capacity[n]));
    }
  });
  EXPECT_EQ(ticks, out.makespan);
}

TEST(Ratio, Parse) {
  EXPECT_EQ(parse_ratio("1:6"), (Ratio{1, 6}));
  EXPECT_THROW(parse_ratio("0:5"), ConfigError);
  EXPECT_THROW(parse_ratio("1-5"), ConfigError);
  EXPECT_EQ(parse_ratio_list("1:2,1:4").size(), 2u);
  const auto range = parse_ratio_list("1:2..1:12:2");
  ASSERT_EQ(range.size(), 6u);
  EXPECT_EQ(range.back(), (Ratio{1, 12}));
}

TEST(WithRatio, DefaultIgnoresLittleSide) {
  ClusterConfig c;
  c.mode = RunMode::Default;
  c = with_ratio(c, {1, 6});
  EXPECT_EQ(c.little_nodes, 0);
  EXPECT_EQ(c.big_nodes, 6);
  EXPECT_EQ(reported_cluster_size(c), 6);

  c.mode = RunMode::CoScheduled;
  c = with_ratio(c, {1, 6});
  EXPECT_EQ(c.little_nodes, 1);
  EXPECT_EQ(reported_cluster_size(c), 8);
  c.optimizer_overhead_node = false;
  EXPECT_EQ(reported_cluster_size(c), 7);
}

TEST(Sweep, OneEntryPerRatioAndModeInOrder) {
  const auto jobs = generate(small_noisy(6));
  const std::vector<Ratio> ratios{{1, 2}, {1, 3}};
  const std::vector<RunMode> modes{RunMode::Default, RunMode::ExclusiveAccess, RunMode::CoScheduled};
  ClusterConfig base;
  const auto serial = sweep(base, ratios, modes, jobs, 1);
  ASSERT_EQ(serial.size(), 6u);
  EXPECT_EQ(serial[0].ratio, (Ratio{1, 2}));
  EXPECT_EQ(serial[2].mode, RunMode::CoScheduled);
  EXPECT_EQ(serial[3].ratio, (Ratio{1, 3}));
  const auto parallel = sweep(base, ratios, modes, jobs, 4);
  for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_EQ(serial[i].outcome, parallel[i].outcome);
}

TEST(Limitation, ExactRequestsGainNothing) {
  std::vector<JobSpec> jobs;
  for (int i = 0; i < 6; ++i) jobs.push_back(constant_job("j" + std::to_string(i), {2, 1000}, {2, 1000}, 30));
  const auto cmp = limitation_scenario(config(RunMode::Default, 1, 2), jobs);
  EXPECT_GE(cmp.exclusive_delta(), 0);
  EXPECT_GE(cmp.coscheduled_delta(), 0);
  EXPECT_EQ(limitation_scenario(config(RunMode::Default, 1, 2), std::vector<JobSpec>{}).default_makespan, 0);

  jobs.push_back(constant_job("over", {4, 1000}, {2, 1000}, 30));
  EXPECT_THROW(limitation_scenario(config(RunMode::Default, 1, 2), jobs), InvalidInput);
}

}  // namespace
}  // namespace littlebig
