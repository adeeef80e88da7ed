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
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "littlebig/engine.hpp"
#include "littlebig/estimator.hpp"
#include "littlebig/resource.hpp"

namespace littlebig {

/// Which value the error is relative to. Reports always name the convention.
enum class ErrorConvention { RelativeToPartial, RelativeToFull };

std::string to_string(ErrorConvention convention);

/// |full - partial| / partial or / full, as a fraction. Both must be > 0.
double accuracy(double full_run_value, double partial_run_value, ErrorConvention convention);

enum class UtilizationBasis {
  /// Sum of true usage over capacity.
  Usage,
  /// Sum of reservations over capacity.
  Allocation,
};

/// Per-tick fraction of big-cluster capacity over [0, makespan).
std::vector<double> utilization_series(const RunOutcome& outcome, Resource dimension,
                                       UtilizationBasis basis = UtilizationBasis::Usage);

struct SeriesStats {
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;

  friend bool operator==(const SeriesStats&, const SeriesStats&) = default;
};

/// Mean and linearly interpolated percentiles. All zero for an empty series.
SeriesStats summarize_series(std::span<const double> series);

/// Full static run vs the estimator's partial run, per dimension.
struct AccuracyRecord {
  ResourceVector full_run;
  ResourceVector partial_run;
  ResourceVector error_relative_to_partial;
  ResourceVector error_relative_to_full;

  friend bool operator==(const AccuracyRecord&, const AccuracyRecord&) = default;
};

/// Full run = median + sample stddev over the whole trace; partial run = the
/// job's estimate.
AccuracyRecord job_accuracy(const UsageTrace& full_trace, const ResourceVector& estimate);

struct JobReport {
  std::string id;
  JobStatus status = JobStatus::Pending;
  ResourceVector requested;
  ResourceVector allocation;
  std::optional<Estimate> cpu_estimate;
  std::optional<Estimate> mem_estimate;
  Tick profiling_ticks = 0;
  Tick enqueued_at = -1;
  Tick start = -1;
  Tick finish = -1;
  int node = -1;
  int kills = 0;
  bool retried = false;
  bool bypassed = false;
  std::optional<AccuracyRecord> accuracy;

  friend bool operator==(const JobReport&, const JobReport&) = default;
};

inline constexpr int kReportSchemaVersion = 1;

struct SimReport {
  int schema_version = kReportSchemaVersion;
  /// False for outputs of an interrupted run.
  bool complete = true;
  ClusterConfig config;
  int cluster_size_nodes = 0;
  std::size_t job_count = 0;
  Tick makespan_ticks = 0;
  Tick makespan_excluding_profiling_ticks = 0;
  Tick profiling_wall_ticks = 0;
  double makespan_s = 0.0;
  SeriesStats cpu_usage;
  SeriesStats cpu_allocation;
  SeriesStats mem_usage;
  SeriesStats mem_allocation;
  /// Integral of (allocated - used): core-seconds and MB-seconds.
  ResourceVector unused_area;
  std::size_t kills = 0;
  std::size_t retries = 0;
  std::size_t unschedulable = 0;
  /// Mean per-job error over profiled jobs, and 1 - that mean.
  ResourceVector mean_error_relative_to_partial;
  ResourceVector mean_error_relative_to_full;
  ResourceVector accuracy_relative_to_partial{1.0, 1.0};
  ResourceVector accuracy_relative_to_full{1.0, 1.0};
  std::vector<JobReport> jobs;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// jobs must be the list the outcome was produced from.
SimReport summarize(const RunOutcome& outcome, std::span<const JobSpec> jobs);

/// Flat JSON object keyed by ClusterConfig field names (capacity as node_cpu
/// and node_mem). Comments are accepted on input.
std::string config_to_json(const ClusterConfig& config);
/// Keys present in text override base. Unknown keys are a ConfigError.
ClusterConfig config_from_json(std::string_view text, const ClusterConfig& base = {});
ClusterConfig load_config(const std::string& path, const ClusterConfig& base = {});

std::string report_to_json(const SimReport& report);
/// Throws UnsupportedVersion or ParseError.
SimReport report_from_json(std::string_view text);
void emit_report(const SimReport& report, const std::string& path);
SimReport load_report(const std::string& path);

/// One row of the "setup,mode,metric,value" comparison CSV.
struct PlotRow {
  std::string setup;
  std::string mode;
  std::string metric;
  double value = 0.0;
};

/// Runtime, utilization and profiling rows for each sweep entry.
std::vector<PlotRow> plot_rows(std::span<const SweepEntry> entries);
std::string plot_csv(std::span<const PlotRow> rows);
void emit_plot_csv(std::span<const SweepEntry> entries, const std::string& path);

/// tick,cpu_used,cpu_allocated,mem_used,mem_allocated,cpu_util,mem_util,...
std::string series_csv(const RunOutcome& outcome);
void emit_series_csv(const RunOutcome& outcome, const std::string& path);

}  // namespace littlebig
