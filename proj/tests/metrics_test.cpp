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
#include "littlebig/metrics.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "littlebig/error.hpp"
#include "littlebig/workload.hpp"

namespace littlebig {
namespace {

using testing::constant_job;

TEST(Accuracy, Conventions) {
  EXPECT_DOUBLE_EQ(accuracy(110, 100, ErrorConvention::RelativeToPartial), 0.1);
  EXPECT_DOUBLE_EQ(accuracy(100, 110, ErrorConvention::RelativeToFull), 0.1);
  EXPECT_DOUBLE_EQ(accuracy(5, 5, ErrorConvention::RelativeToFull), 0.0);
  EXPECT_THROW(accuracy(0, 1, ErrorConvention::RelativeToFull), InvalidInput);
}

TEST(JobAccuracy, ConstantTraceIsExact) {
  const UsageTrace t{std::vector<ResourceVector>(30, {2, 500})};
  const auto r = job_accuracy(t, {2, 500});
  EXPECT_EQ(r.error_relative_to_full, (ResourceVector{0, 0}));
  EXPECT_EQ(r.full_run, (ResourceVector{2, 500}));
}

RunOutcome outcome_with(std::vector<TickUsage> ticks, ResourceVector capacity) {
  RunOutcome o;
  o.big_capacity = capacity;
  o.aggregate = std::move(ticks);
  o.makespan = static_cast<Tick>(o.aggregate.size());
  return o;
}

TEST(UtilizationSeries, Examples) {
  const auto o = outcome_with({{{2, 0}, {4, 8000}}, {{0, 0}, {0, 0}}, {{6, 12000}, {6, 12000}}},
                              {8, 16000});
  const auto cpu = utilization_series(o, Resource::Cpu);
  EXPECT_EQ(cpu, (std::vector<double>{0.25, 0.0, 0.75}));
  const auto alloc = utilization_series(o, Resource::Cpu, UtilizationBasis::Allocation);
  EXPECT_EQ(alloc, (std::vector<double>{0.5, 0.0, 0.75}));
}

TEST(SummarizeSeries, InterpolatedPercentiles) {
  const std::vector<double> xs{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto s = summarize_series(xs);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.p50, 5.0);
  EXPECT_DOUBLE_EQ(s.p95, 9.5);
  EXPECT_EQ(summarize_series(std::vector<double>{}), SeriesStats{});
}

std::vector<JobSpec> workload() {
  WorkloadSpec w;
  w.count = 16;
  w.duration_min_s = 10;
  w.duration_max_s = 40;
  w.shape = TraceShape::NoisySteady;
  return generate(w);
}

ClusterConfig config(RunMode mode) {
  ClusterConfig c;
  c.mode = mode;
  c.little_nodes = mode == RunMode::Default ? 0 : 1;
  c.big_nodes = 2;
  return c;
}

TEST(Summarize, ReportIsConsistentWithOutcome) {
  const auto jobs = workload();
  const auto out = run(config(RunMode::CoScheduled), jobs);
  const auto r = summarize(out, jobs);
  EXPECT_EQ(r.makespan_ticks, out.makespan);
  EXPECT_EQ(r.job_count, jobs.size());
  EXPECT_EQ(r.cluster_size_nodes, 4);
  EXPECT_GE(r.unused_area.cpu, 0.0);
  EXPECT_GE(r.unused_area.mem, 0.0);
  EXPECT_LE(r.cpu_usage.mean, r.cpu_allocation.mean + 1e-12);
  EXPECT_GT(r.accuracy_relative_to_full.cpu, 0.0);
  EXPECT_LE(r.accuracy_relative_to_full.cpu, 1.0);
  for (const auto& j : r.jobs) EXPECT_TRUE(j.accuracy.has_value() || j.bypassed);
}

TEST(Summarize, DefaultModeHasNoAccuracy) {
  const auto jobs = workload();
  const auto r = summarize(run(config(RunMode::Default), jobs), jobs);
  for (const auto& j : r.jobs) EXPECT_FALSE(j.accuracy.has_value());
  EXPECT_EQ(r.accuracy_relative_to_partial, (ResourceVector{1, 1}));
}

TEST(ReportJson, RoundTrip) {
  const auto jobs = workload();
  const auto r = summarize(run(config(RunMode::ExclusiveAccess), jobs), jobs);
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
}

TEST(ReportJson, FutureSchemaRejected) {
  EXPECT_THROW(report_from_json(R"({"schema_version": 2})"), UnsupportedVersion);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST(PlotCsv, RowsPerModeAndFaithfulValues) {
  const auto jobs = workload();
  const std::vector<Ratio> ratios{{1, 2}, {1, 3}};
  const std::vector<RunMode> modes{RunMode::Default, RunMode::ExclusiveAccess, RunMode::CoScheduled};
  const auto entries = sweep(ClusterConfig{}, ratios, modes, jobs);
  const auto rows = parse_csv(plot_csv(plot_rows(entries)));
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], (std::vector<std::string>{"setup", "mode", "metric", "value"}));

  std::size_t runtime_rows = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 4u);
    if (rows[i][2] != "runtime_s") continue;
    ++runtime_rows;
    const auto& e = entries[(runtime_rows - 1)];
    EXPECT_EQ(rows[i][0], to_string(e.ratio));
    EXPECT_EQ(rows[i][1], to_string(e.mode));
    EXPECT_DOUBLE_EQ(std::stod(rows[i][3]), static_cast<double>(e.outcome.makespan));
  }
  EXPECT_EQ(runtime_rows, 6u);

  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto util = utilization_series(entries[k].outcome, Resource::Cpu);
    const double mean = summarize_series(util).mean;
    bool found = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i][0] == to_string(entries[k].ratio) && rows[i][1] == to_string(entries[k].mode) &&
          rows[i][2] == "cpu_util") {
        EXPECT_NEAR(std::stod(rows[i][3]), mean, 1e-9);
        found = true;
      }
    }
    EXPECT_TRUE(found);
  }
}

TEST(SeriesCsv, OneRowPerTick) {
  std::vector<JobSpec> jobs{constant_job("a", {2, 4000}, {2, 4000}, 10)};
  ClusterConfig c;
  const auto out = run(c, jobs);
  const auto rows = parse_csv(series_csv(out));
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_DOUBLE_EQ(std::stod(rows[1][5]), 0.25);
}

}  // namespace
}  // namespace littlebig
