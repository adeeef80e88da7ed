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
#include "littlebig/profiler.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "littlebig/error.hpp"

namespace littlebig {

std::string to_string(ProfilingMode mode) {
  return mode == ProfilingMode::Exclusive ? "exclusive" : "coscheduled";
}

namespace {

// Weighted water-filling: every job gets min(cap, weighted share of what is
// left); capacity a satisfied job does not use is redistributed.
std::vector<double> proportional_share(std::span<const double> caps,
                                       std::span<const double> weights, double capacity) {
  std::vector<double> out(caps.begin(), caps.end());
  const double total = std::accumulate(caps.begin(), caps.end(), 0.0);
  if (total <= capacity) return out;

  std::vector<std::size_t> open(caps.size());
  std::iota(open.begin(), open.end(), std::size_t{0});
  double remaining = capacity;
  while (!open.empty()) {
    double weight_sum = 0.0;
    for (auto i : open) weight_sum += weights[i];
    if (weight_sum <= 0.0) {
      for (auto i : open) out[i] = remaining / static_cast<double>(open.size());
      break;
    }
    std::vector<std::size_t> still_open;
    for (auto i : open) {
      const double share = remaining * weights[i] / weight_sum;
      if (caps[i] <= share) {
        out[i] = caps[i];
      } else {
        still_open.push_back(i);
      }
    }
    if (still_open.size() == open.size()) {
      for (auto i : open) out[i] = remaining * weights[i] / weight_sum;
      break;
    }
    for (auto i : open) {
      if (std::find(still_open.begin(), still_open.end(), i) == still_open.end()) {
        remaining -= caps[i];
      }
    }
    remaining = std::max(0.0, remaining);
    open = std::move(still_open);
  }
  return out;
}

}  // namespace

std::vector<ResourceVector> observe_node(ProfilingMode mode, std::span<const Resident> residents,
                                         const ResourceVector& node_capacity) {
  std::vector<ResourceVector> out;
  out.reserve(residents.size());
  if (mode == ProfilingMode::Exclusive) {
    for (const auto& r : residents) out.push_back(r.demand);
    return out;
  }

  std::vector<double> caps;
  std::vector<double> weights;
  caps.reserve(residents.size());
  weights.reserve(residents.size());
  for (const auto& r : residents) {
    caps.push_back(std::min(r.demand.cpu, r.requested.cpu));
    weights.push_back(r.requested.cpu);
  }
  const auto cpu = proportional_share(caps, weights, node_capacity.cpu);
  for (std::size_t i = 0; i < residents.size(); ++i) {
    out.push_back({cpu[i], std::min(residents[i].demand.mem, residents[i].requested.mem)});
  }
  return out;
}

ResourceVector observe_sample(ProfilingMode mode, std::size_t which,
                              std::span<const Resident> residents,
                              const ResourceVector& node_capacity) {
  if (which >= residents.size()) throw InvalidInput("observe_sample: resident index out of range");
  return observe_node(mode, residents, node_capacity)[which];
}

LittleCluster::LittleCluster(std::vector<NodeSpec> nodes, ProfilingMode mode,
                             EstimatorOptions options)
    : nodes_(std::move(nodes)), mode_(mode), options_(options), residents_(nodes_.size()) {
  if (nodes_.empty()) throw ConfigError("little cluster needs at least one node");
  validate(options_);
}

void LittleCluster::submit(std::size_t job_index, const JobSpec& job) {
  queue_.push_back({job_index, &job});
}

ResourceVector LittleCluster::reserved(std::size_t node) const noexcept {
  ResourceVector sum;
  for (const auto& a : residents_[node]) sum += a.job->requested;
  return sum;
}

std::optional<std::string> LittleCluster::bypass_reason(const JobSpec& job) const {
  if (job.trace.size() < options_.window_size) {
    return "trace shorter than one observation window";
  }
  if (mode_ == ProfilingMode::CoScheduled) {
    const bool fits_somewhere = std::any_of(nodes_.begin(), nodes_.end(), [&](const NodeSpec& n) {
      return fits_within(job.requested, n.capacity);
    });
    if (!fits_somewhere) return "request exceeds every little node";
  }
  return std::nullopt;
}

ProfilingResult LittleCluster::bypass(const Queued& q, Tick now, std::string reason) const {
  ProfilingResult r;
  r.job_index = q.job_index;
  r.job_id = q.job->id;
  r.cpu_estimate = {q.job->requested.cpu, 0.0, q.job->requested.cpu, 0, false};
  r.mem_estimate = {q.job->requested.mem, 0.0, q.job->requested.mem, 0, false};
  r.profiling_ticks = 0;
  r.admitted_at = now;
  r.ready_at = now;
  r.bypassed = true;
  r.bypass_reason = std::move(reason);
  return r;
}

void LittleCluster::admit(Tick now, std::vector<ProfilingResult>& out) {
  while (!queue_.empty()) {
    const Queued head = queue_.front();
    if (auto reason = bypass_reason(*head.job)) {
      out.push_back(bypass(head, now, std::move(*reason)));
      queue_.pop_front();
      continue;
    }

    std::optional<std::size_t> target;
    if (mode_ == ProfilingMode::Exclusive) {
      if (resident_count_ == 0) target = 0;
    } else {
      for (std::size_t n = 0; n < nodes_.size(); ++n) {
        if (fits_within(reserved(n) + head.job->requested, nodes_[n].capacity)) {
          target = n;
          break;
        }
      }
    }
    if (!target) return;

    residents_[*target].push_back(Active{head.job_index, head.job, now,
                                         StreamEstimator(options_), StreamEstimator(options_),
                                         UsageTrace{}});
    ++resident_count_;
    queue_.pop_front();
  }
}

ProfilingResult LittleCluster::finish(Active& a, Tick now) const {
  ProfilingResult r;
  r.job_index = a.job_index;
  r.job_id = a.job->id;
  r.cpu_estimate = a.cpu.finish();
  r.mem_estimate = a.mem.finish();
  r.admitted_at = a.admitted_at;
  r.profiling_ticks = now - a.admitted_at + 1;
  r.ready_at = now + 1;
  r.observed_samples = std::move(a.observed);
  return r;
}

std::vector<ProfilingResult> LittleCluster::step(Tick now) {
  std::vector<ProfilingResult> out;
  admit(now, out);
  busy_last_step_ = resident_count_ > 0;

  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    auto& actives = residents_[n];
    if (actives.empty()) continue;

    std::vector<Resident> view;
    view.reserve(actives.size());
    for (const auto& a : actives) {
      const auto idx = static_cast<std::size_t>(now - a.admitted_at);
      view.push_back({a.job->trace[idx], a.job->requested});
    }
    const auto observed = observe_node(mode_, view, nodes_[n].capacity);

    std::vector<Active> keep;
    keep.reserve(actives.size());
    for (std::size_t i = 0; i < actives.size(); ++i) {
      auto& a = actives[i];
      a.observed.samples.push_back(observed[i]);
      a.cpu.push(observed[i].cpu);
      a.mem.push(observed[i].mem);
      const bool trace_exhausted = a.observed.size() >= a.job->trace.size();
      if ((a.cpu.done() && a.mem.done()) || trace_exhausted) {
        out.push_back(finish(a, now));
        --resident_count_;
      } else {
        keep.push_back(std::move(a));
      }
    }
    actives = std::move(keep);
  }
  return out;
}

namespace {

ProfilingRun profile_all(std::span<const JobSpec> queue, std::vector<NodeSpec> nodes,
                         ProfilingMode mode, const EstimatorOptions& options) {
  LittleCluster little(std::move(nodes), mode, options);
  for (std::size_t i = 0; i < queue.size(); ++i) little.submit(i, queue[i]);

  ProfilingRun run;
  for (Tick now = 0; !little.idle(); ++now) {
    auto done = little.step(now);
    if (little.busy_last_step()) ++run.wall_ticks;
    for (auto& r : done) {
      run.total_job_ticks += r.profiling_ticks;
      run.results.push_back(std::move(r));
    }
  }
  return run;
}

}  // namespace

ProfilingRun profile_exclusive(std::span<const JobSpec> queue, std::vector<NodeSpec> nodes,
                               const EstimatorOptions& options) {
  return profile_all(queue, std::move(nodes), ProfilingMode::Exclusive, options);
}

ProfilingRun profile_coscheduled(std::span<const JobSpec> queue, std::vector<NodeSpec> nodes,
                                 const EstimatorOptions& options) {
  return profile_all(queue, std::move(nodes), ProfilingMode::CoScheduled, options);
}

}  // namespace littlebig
