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
#include "littlebig/bigsched.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "littlebig/error.hpp"

namespace littlebig {

std::string to_string(JobStatus status) {
  switch (status) {
    case JobStatus::Pending: return "pending";
    case JobStatus::Running: return "running";
    case JobStatus::Completed: return "completed";
    case JobStatus::Killed: return "killed";
    case JobStatus::Retried: return "retried";
    case JobStatus::Unschedulable: return "unschedulable";
  }
  return "unknown";
}

std::string to_string(KillPolicy policy) {
  return policy == KillPolicy::Fail ? "fail" : "retry";
}

KillPolicy parse_kill_policy(const std::string& name) {
  if (name == "fail") return KillPolicy::Fail;
  if (name == "retry" || name == "retry-original-once") return KillPolicy::RetryOriginalOnce;
  throw ConfigError("unknown kill policy '" + name + "' (expected fail|retry)");
}

PlacementPass first_fit_place(std::deque<PendingJob>& pending, std::vector<NodeState>& nodes) {
  PlacementPass pass;
  std::deque<PendingJob> still_pending;
  for (const auto& p : pending) {
    const bool schedulable = std::any_of(nodes.begin(), nodes.end(), [&](const NodeState& n) {
      return fits_within(p.allocation, n.capacity);
    });
    if (!schedulable) {
      pass.unschedulable.push_back(p);
      continue;
    }
    bool placed = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (fits_within(nodes[i].allocated + p.allocation, nodes[i].capacity)) {
        nodes[i].allocated += p.allocation;
        nodes[i].residents.push_back(p.job);
        pass.placed.push_back({p, i});
        placed = true;
        break;
      }
    }
    if (!placed) still_pending.push_back(p);
  }
  pending = std::move(still_pending);
  return pass;
}

std::vector<KillEvent> enforce_tick(std::span<const RunningJob> running,
                                    std::span<const ResourceVector> demands) {
  if (running.size() != demands.size()) {
    throw InvalidInput("enforce_tick: one demand per running job required");
  }
  std::vector<KillEvent> kills;
  for (std::size_t i = 0; i < running.size(); ++i) {
    if (!fits_within(demands[i], running[i].allocation)) {
      kills.push_back({i, demands[i], running[i].allocation});
    }
  }
  return kills;
}

KillDisposition handle_kill(const RunningJob& job, KillPolicy policy,
                            const ResourceVector& original_request) {
  KillDisposition d;
  if (policy == KillPolicy::RetryOriginalOnce && !job.retry) {
    d.status = JobStatus::Retried;
    d.requeue = {job.job, original_request, job.duration, true};
  } else {
    d.status = JobStatus::Killed;
  }
  return d;
}

std::vector<std::size_t> complete_tick(std::span<const RunningJob> running, Tick now) {
  std::vector<std::size_t> done;
  for (std::size_t i = 0; i < running.size(); ++i) {
    if (now - running[i].start + 1 >= running[i].duration) done.push_back(i);
  }
  return done;
}

BigCluster::BigCluster(std::vector<NodeSpec> nodes) {
  if (nodes.empty()) throw ConfigError("big cluster needs at least one node");
  nodes_.reserve(nodes.size());
  for (const auto& n : nodes) nodes_.push_back({n.capacity, {}, {}});
}

PlacementPass BigCluster::place(Tick now) {
  auto pass = first_fit_place(pending_, nodes_);
  for (const auto& p : pass.placed) {
    running_.push_back({p.job.job, p.node, p.job.allocation, now, p.job.duration, p.job.retry});
  }
  return pass;
}

RunningJob BigCluster::release(std::size_t running_index) {
  if (running_index >= running_.size()) throw InvalidInput("release: index out of range");
  RunningJob job = running_[running_index];
  running_.erase(running_.begin() + static_cast<std::ptrdiff_t>(running_index));
  auto& residents = nodes_[job.node].residents;
  residents.erase(std::find(residents.begin(), residents.end(), job.job));
  recompute_allocated(job.node);
  return job;
}

void BigCluster::recompute_allocated(std::size_t node) {
  // Summed afresh in placement order so the total never drifts from the
  // residents through repeated floating-point add/subtract.
  ResourceVector sum;
  for (auto job : nodes_[node].residents) {
    for (const auto& r : running_) {
      if (r.job == job) {
        sum += r.allocation;
        break;
      }
    }
  }
  nodes_[node].allocated = sum;
}

void BigCluster::check_invariants() const {
  std::set<std::size_t> seen;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const auto& node = nodes_[n];
    ResourceVector sum;
    for (auto job : node.residents) {
      if (!seen.insert(job).second) {
        throw InvariantViolation("job " + std::to_string(job) + " resident on two nodes");
      }
      auto it = std::find_if(running_.begin(), running_.end(),
                             [&](const RunningJob& r) { return r.job == job; });
      if (it == running_.end() || it->node != n) {
        throw InvariantViolation("node " + std::to_string(n) + " lists a job it does not run");
      }
      sum += it->allocation;
    }
    const double tol = 1e-9;
    if (std::abs(sum.cpu - node.allocated.cpu) > tol * std::max(1.0, sum.cpu) ||
        std::abs(sum.mem - node.allocated.mem) > tol * std::max(1.0, sum.mem)) {
      std::ostringstream os;
      os << "node " << n << " allocated " << node.allocated << " != resident sum " << sum;
      throw InvariantViolation(os.str());
    }
    if (!fits_within(node.allocated, node.capacity)) {
      std::ostringstream os;
      os << "node " << n << " over-allocated: " << node.allocated << " > " << node.capacity;
      throw InvariantViolation(os.str());
    }
  }
  if (seen.size() != running_.size()) {
    throw InvariantViolation("running job missing from node residency");
  }
}

}  // namespace littlebig
