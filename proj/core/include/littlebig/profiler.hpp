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
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "littlebig/estimator.hpp"
#include "littlebig/resource.hpp"

namespace littlebig {

enum class ProfilingMode {
  /// One job on the little cluster at a time; samples are unmodified.
  Exclusive,
  /// Many jobs admitted by reservation; samples are capped by cgroup limits.
  CoScheduled,
};

std::string to_string(ProfilingMode mode);

/// A job resident on a little node, as seen by the contention model.
struct Resident {
  ResourceVector demand;
  ResourceVector requested;
};

/// What every resident of one node observes this tick.
///
/// Exclusive: the true demand, unmodified.
/// CoScheduled: mem = min(demand, request). cpu = min(demand, request), and
/// when those capped demands sum past the node's cpu capacity the capacity is
/// divided by work-conserving proportional share weighted by requested cpu
/// (cgroup cpu.shares semantics).
std::vector<ResourceVector> observe_node(ProfilingMode mode, std::span<const Resident> residents,
                                         const ResourceVector& node_capacity);

/// observe_node for a single resident.
ResourceVector observe_sample(ProfilingMode mode, std::size_t which,
                              std::span<const Resident> residents,
                              const ResourceVector& node_capacity);

struct ProfilingResult {
  std::size_t job_index = 0;
  std::string job_id;
  Estimate cpu_estimate;
  Estimate mem_estimate;
  /// Ticks the job spent resident on the little cluster.
  Tick profiling_ticks = 0;
  Tick admitted_at = 0;
  /// First tick the big cluster may see the result.
  Tick ready_at = 0;
  /// Samples as observed under contention.
  UsageTrace observed_samples;
  /// The job skipped optimization and keeps its original request.
  bool bypassed = false;
  std::string bypass_reason;

  ResourceVector allocation() const noexcept {
    return {cpu_estimate.optimal, mem_estimate.optimal};
  }
};

/// The little cluster, advanced one tick at a time by the engine.
///
/// Queue order is submission order. Admission is strictly FIFO: the head of
/// the queue blocks later jobs until it can be admitted.
class LittleCluster {
 public:
  LittleCluster(std::vector<NodeSpec> nodes, ProfilingMode mode, EstimatorOptions options);

  /// Appends a job to the profiling queue. The JobSpec must outlive this object.
  void submit(std::size_t job_index, const JobSpec& job);

  /// Admits, observes one sample for every resident and returns the jobs whose
  /// profiling concluded this tick (plus any bypassed at admission).
  std::vector<ProfilingResult> step(Tick now);

  bool has_residents() const noexcept { return resident_count_ > 0; }
  /// At least one job observed a sample during the last step().
  bool busy_last_step() const noexcept { return busy_last_step_; }
  bool idle() const noexcept { return queue_.empty() && resident_count_ == 0; }
  std::size_t queued() const noexcept { return queue_.size(); }
  std::size_t resident_count() const noexcept { return resident_count_; }

  /// Sum of resident reservations on a node.
  ResourceVector reserved(std::size_t node) const noexcept;
  const std::vector<NodeSpec>& nodes() const noexcept { return nodes_; }
  ProfilingMode mode() const noexcept { return mode_; }

 private:
  struct Queued {
    std::size_t job_index;
    const JobSpec* job;
  };
  struct Active {
    std::size_t job_index;
    const JobSpec* job;
    Tick admitted_at;
    StreamEstimator cpu;
    StreamEstimator mem;
    UsageTrace observed;
  };

  void admit(Tick now, std::vector<ProfilingResult>& out);
  std::optional<std::string> bypass_reason(const JobSpec& job) const;
  ProfilingResult bypass(const Queued& q, Tick now, std::string reason) const;
  ProfilingResult finish(Active& a, Tick now) const;

  std::vector<NodeSpec> nodes_;
  ProfilingMode mode_;
  EstimatorOptions options_;
  std::deque<Queued> queue_;
  std::vector<std::vector<Active>> residents_;
  std::size_t resident_count_ = 0;
  bool busy_last_step_ = false;
};

struct ProfilingRun {
  /// In completion order.
  std::vector<ProfilingResult> results;
  /// Ticks during which at least one job was resident.
  Tick wall_ticks = 0;
  /// Sum of per-job profiling ticks.
  Tick total_job_ticks = 0;
};

/// Profiles the queue one job at a time in queue order.
ProfilingRun profile_exclusive(std::span<const JobSpec> queue, std::vector<NodeSpec> nodes,
                               const EstimatorOptions& options);

/// Profiles the queue with co-residency admitted by reservation.
ProfilingRun profile_coscheduled(std::span<const JobSpec> queue, std::vector<NodeSpec> nodes,
                                 const EstimatorOptions& options);

}  // namespace littlebig
