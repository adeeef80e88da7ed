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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace littlebig {

/// Simulation time in ticks. One tick is one sample period.
using Tick = std::int64_t;

/// A (cpu, memory) quantity. CPU is in cores and may be fractional; memory is
/// in megabytes. Used for demands, requests, allocations and capacities.
struct ResourceVector {
  double cpu = 0.0;
  double mem = 0.0;

  friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

  ResourceVector& operator+=(const ResourceVector& other) noexcept {
    cpu += other.cpu;
    mem += other.mem;
    return *this;
  }
  friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) noexcept {
    return a += b;
  }
  friend ResourceVector operator*(ResourceVector a, double k) noexcept {
    a.cpu *= k;
    a.mem *= k;
    return a;
  }

  /// Both components finite and non-negative.
  bool valid() const noexcept;
};

std::ostream& operator<<(std::ostream& os, const ResourceVector& r);

/// True iff demand <= capacity in both dimensions.
constexpr bool fits_within(const ResourceVector& demand,
                           const ResourceVector& capacity) noexcept {
  return demand.cpu <= capacity.cpu && demand.mem <= capacity.mem;
}

/// Component-wise a - b, clamped at zero.
ResourceVector saturating_sub(const ResourceVector& a, const ResourceVector& b) noexcept;
ResourceVector component_min(const ResourceVector& a, const ResourceVector& b) noexcept;
ResourceVector component_max(const ResourceVector& a, const ResourceVector& b) noexcept;

enum class Resource { Cpu, Mem };

constexpr double component(const ResourceVector& r, Resource which) noexcept {
  return which == Resource::Cpu ? r.cpu : r.mem;
}

std::string to_string(Resource which);

/// One node's capacity. Defaults to 8 cores and 16000 MB.
struct NodeSpec {
  ResourceVector capacity{8.0, 16000.0};

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

/// A job's true demand, one sample per sample period from job-relative t=0.
struct UsageTrace {
  std::vector<ResourceVector> samples;

  friend bool operator==(const UsageTrace&, const UsageTrace&) = default;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  const ResourceVector& operator[](std::size_t i) const { return samples[i]; }

  /// Component-wise maximum over all samples; zero for an empty trace.
  ResourceVector peak() const noexcept;

  /// One dimension of the first n samples (all samples if n exceeds size).
  std::vector<double> dimension(Resource which, std::size_t n = SIZE_MAX) const;
};

/// Throws InvalidInput unless the trace is non-empty with valid samples.
void validate(const UsageTrace& trace);

/// A user's submission: what they asked for and what the job really uses.
struct JobSpec {
  std::string id;
  ResourceVector requested;
  UsageTrace trace;
  std::int64_t duration_s = 0;

  friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

/// Throws InvalidInput if the job breaks its invariants: positive request,
/// positive duration, trace length == duration_s / sample_period_s.
void validate(const JobSpec& job, double sample_period_s = 1.0);

/// Throws InvalidInput on duplicate ids or any invalid job.
void validate(std::span<const JobSpec> jobs, double sample_period_s = 1.0);

/// Monotonic simulated clock owned by one engine run.
class SimClock {
 public:
  explicit SimClock(double sample_period_s = 1.0) : period_s_(sample_period_s) {}

  Tick now() const noexcept { return now_; }
  void advance() noexcept { ++now_; }
  double seconds() const noexcept { return static_cast<double>(now_) * period_s_; }
  double period_s() const noexcept { return period_s_; }

 private:
  Tick now_ = 0;
  double period_s_;
};

}  // namespace littlebig
