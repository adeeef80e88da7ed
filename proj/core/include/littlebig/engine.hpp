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

// Discrete-time orchestration of the little/big pipeline.
//
// Every tick runs the same fixed sequence, and goldens depend on it:
//   0. arrivals join the profiling queue (or, in Default mode, the big queue)
//   1. the little cluster admits and observes one sample per resident
//   2. profiling results that are ready join the big-cluster pending queue
//   3. one first-fit placement pass
//   4. every running job replays its demand sample; overruns are killed
//   5. completions and kills free capacity at the end of the tick
//
// A job profiled during ticks [a, a+5) is enqueued and can start at a+5.
// A job of duration d started at s completes at time s+d.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "littlebig/bigsched.hpp"
#include "littlebig/estimator.hpp"
#include "littlebig/profiler.hpp"
#include "littlebig/resource.hpp"

namespace littlebig {

enum class RunMode { Default, ExclusiveAccess, CoScheduled };

std::string to_string(RunMode mode);
/// "default", "exclusive", "coscheduled". Throws ConfigError otherwise.
RunMode parse_run_mode(const std::string& name);

constexpr bool is_optimized(RunMode mode) noexcept { return mode != RunMode::Default; }

/// "1:k": one little node for k big nodes.
struct Ratio {
  int little = 1;
  int big = 1;

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend auto operator<=>(const Ratio&, const Ratio&) = default;
};

std::string to_string(const Ratio& ratio);
/// Parses "L:B" with L, B >= 1. Throws ConfigError.
Ratio parse_ratio(const std::string& text);
/// Comma list "1:2,1:4" or range "1:2..1:12:2" (big side from 2 to 12 step 2).
std::vector<Ratio> parse_ratio_list(const std::string& text);

struct ClusterConfig {
  int little_nodes = 0;
  int big_nodes = 1;
  ResourceVector node_capacity{8.0, 16000.0};
  RunMode mode = RunMode::Default;
  /// The optimizer's own host counts toward reported cluster size in
  /// optimized modes. It never adds big-cluster capacity.
  bool optimizer_overhead_node = true;
  double sample_period_s = 1.0;
  EstimatorOptions estimator;
  KillPolicy kill_policy = KillPolicy::RetryOriginalOnce;
  std::uint64_t seed = 0;
  /// Poisson arrivals in jobs per second. 0 submits every job at t=0.
  double arrival_rate = 0.0;
  /// Re-verify node bookkeeping every tick; throws InvariantViolation.
  bool check_invariants = false;
  Tick max_ticks = 100'000'000;

  friend bool operator==(const ClusterConfig&, const ClusterConfig&) = default;
};

/// Throws ConfigError if the configuration is inconsistent.
void validate(const ClusterConfig& config);

/// Applies a ratio. Default mode ignores the little side: little=0, big=k.
ClusterConfig with_ratio(ClusterConfig config, const Ratio& ratio);

/// little + big, plus the optimizer host when it is counted.
int reported_cluster_size(const ClusterConfig& config) noexcept;

struct JobRecord {
  std::string id;
  ResourceVector requested;
  Tick arrival = 0;
  /// Went through the little cluster (false in Default mode).
  bool profiled = false;
  bool bypassed = false;
  std::string bypass_reason;
  std::optional<Estimate> cpu_estimate;
  std::optional<Estimate> mem_estimate;
  Tick profiling_ticks = 0;
  /// First time the job joined the big-cluster queue; -1 if never.
  Tick enqueued_at = -1;
  /// Allocation of the latest attempt on the big cluster.
  ResourceVector allocation;
  int node = -1;
  Tick start = -1;
  /// Time of the terminal event; -1 if none.
  Tick finish = -1;
  JobStatus status = JobStatus::Pending;
  int kills = 0;
  bool retried = false;
  /// Ticks of trace replayed by the attempt that completed.
  Tick completed_running_ticks = 0;

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

/// Usage is the true demand capped at the allocation.
struct TickUsage {
  ResourceVector used;
  ResourceVector allocated;

  friend bool operator==(const TickUsage&, const TickUsage&) = default;
};

struct RunOutcome {
  ClusterConfig config;
  std::vector<JobRecord> jobs;
  /// One entry per tick in [0, makespan).
  std::vector<TickUsage> aggregate;
  /// per_node[n][t].
  std::vector<std::vector<TickUsage>> per_node;
  ResourceVector big_capacity;
  Tick makespan = 0;
  Tick profiling_wall_ticks = 0;
  std::size_t kills = 0;
  std::size_t retries = 0;
  std::size_t unschedulable = 0;

  Tick makespan_excluding_profiling() const noexcept {
    return makespan > profiling_wall_ticks ? makespan - profiling_wall_ticks : 0;
  }

  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

/// State of the big cluster at step 4 of a tick, before anything is freed.
struct TickSnapshot {
  struct Job {
    std::size_t job = 0;
    std::size_t node = 0;
    ResourceVector allocation;
    ResourceVector demand;
    bool killed = false;
  };

  Tick now = 0;
  std::vector<NodeState> nodes;
  std::vector<Job> running;
  /// Reservations per little node.
  std::vector<ResourceVector> little_reserved;
  std::vector<ResourceVector> little_capacity;
};

using TickObserver = std::function<void(const TickSnapshot&)>;

/// Simulates one configuration over a job list. Deterministic: a pure
/// function of (config, jobs). Throws ConfigError / InvalidInput before
/// simulating anything.
RunOutcome run(const ClusterConfig& config, std::span<const JobSpec> jobs,
               const TickObserver& observer = {});

struct SweepEntry {
  Ratio ratio;
  RunMode mode = RunMode::Default;
  RunOutcome outcome;
};

using SweepCallback = std::function<void(const SweepEntry&)>;

/// One run per (ratio, mode), ordered ratio-major. Runs may execute on up to
/// parallel threads; result order does not depend on it. on_complete is called
/// from the worker thread as each run finishes and must be thread-safe.
std::vector<SweepEntry> sweep(const ClusterConfig& base, std::span<const Ratio> ratios,
                              std::span<const RunMode> modes, std::span<const JobSpec> jobs,
                              unsigned parallel = 1, const SweepCallback& on_complete = {});

struct LimitationComparison {
  Tick default_makespan = 0;
  Tick exclusive_makespan = 0;
  Tick coscheduled_makespan = 0;

  Tick exclusive_delta() const noexcept { return exclusive_makespan - default_makespan; }
  Tick coscheduled_delta() const noexcept { return coscheduled_makespan - default_makespan; }
};

/// Default vs both optimized modes on jobs whose requests already equal their
/// peak demand. Uses config's node counts (Default runs with big_nodes only).
LimitationComparison limitation_scenario(const ClusterConfig& config,
                                         std::span<const JobSpec> jobs);

}  // namespace littlebig
