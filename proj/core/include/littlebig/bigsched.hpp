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
#include <span>
#include <string>
#include <vector>

#include "littlebig/resource.hpp"

namespace littlebig {

enum class JobStatus { Pending, Running, Completed, Killed, Retried, Unschedulable };
std::string to_string(JobStatus status);

enum class KillPolicy {
  /// A killed job is terminal.
  Fail,
  /// A killed job is requeued once with its original request.
  RetryOriginalOnce,
};
std::string to_string(KillPolicy policy);
/// Accepts "fail" and "retry". Throws ConfigError otherwise.
KillPolicy parse_kill_policy(const std::string& name);

struct NodeState {
  ResourceVector capacity;
  ResourceVector allocated;
  /// Job indices, in placement order.
  std::vector<std::size_t> residents;

  ResourceVector free() const noexcept { return saturating_sub(capacity, allocated); }
};

/// A job waiting for the big cluster.
struct PendingJob {
  std::size_t job = 0;
  ResourceVector allocation;
  /// Trace length in ticks.
  Tick duration = 0;
  bool retry = false;
};

struct Placement {
  PendingJob job;
  std::size_t node = 0;
};

struct PlacementPass {
  std::vector<Placement> placed;
  /// Jobs whose allocation exceeds every node's total capacity. Terminal.
  std::vector<PendingJob> unschedulable;
};

/// One first-fit pass over the whole pending queue. Each job goes to the
/// lowest-index node with enough free capacity; jobs that fit nowhere stay
/// pending in their original order. Updates node allocations in place.
PlacementPass first_fit_place(std::deque<PendingJob>& pending, std::vector<NodeState>& nodes);

/// A job currently running on the big cluster.
struct RunningJob {
  std::size_t job = 0;
  std::size_t node = 0;
  ResourceVector allocation;
  Tick start = 0;
  Tick duration = 0;
  bool retry = false;
};

struct KillEvent {
  std::size_t running_index = 0;
  ResourceVector demand;
  ResourceVector allocation;
};

/// Jobs whose demand at this tick exceeds their allocation in either
/// dimension. demands[i] belongs to running[i].
std::vector<KillEvent> enforce_tick(std::span<const RunningJob> running,
                                    std::span<const ResourceVector> demands);

struct KillDisposition {
  JobStatus status = JobStatus::Killed;
  /// Set when status == Retried: what to requeue.
  PendingJob requeue;
};

/// Fail: terminal Killed. RetryOriginalOnce: a first kill requeues the job
/// with its original request (status Retried); a kill of a retry is terminal.
KillDisposition handle_kill(const RunningJob& job, KillPolicy policy,
                            const ResourceVector& original_request);

/// Indices into running of jobs whose trace finishes replaying at this tick
/// (now - start + 1 == duration). Such a job completes at time now + 1.
std::vector<std::size_t> complete_tick(std::span<const RunningJob> running, Tick now);

/// The big cluster's mutable state: node table, FIFO pending queue and
/// running jobs. Advanced only by its owner.
class BigCluster {
 public:
  explicit BigCluster(std::vector<NodeSpec> nodes);

  void enqueue(PendingJob job) { pending_.push_back(job); }
  PlacementPass place(Tick now);

  /// Removes a running job and frees its allocation.
  RunningJob release(std::size_t running_index);

  const std::vector<NodeState>& nodes() const noexcept { return nodes_; }
  const std::vector<RunningJob>& running() const noexcept { return running_; }
  const std::deque<PendingJob>& pending() const noexcept { return pending_; }
  bool drained() const noexcept { return pending_.empty() && running_.empty(); }

  /// Throws InvariantViolation if node bookkeeping is inconsistent.
  void check_invariants() const;

 private:
  void recompute_allocated(std::size_t node);

  std::vector<NodeState> nodes_;
  std::deque<PendingJob> pending_;
  std::vector<RunningJob> running_;
};

}  // namespace littlebig
