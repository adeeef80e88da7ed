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
#include "littlebig/resource.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "littlebig/error.hpp"

namespace littlebig {

bool ResourceVector::valid() const noexcept {
  return std::isfinite(cpu) && std::isfinite(mem) && cpu >= 0.0 && mem >= 0.0;
}

std::ostream& operator<<(std::ostream& os, const ResourceVector& r) {
  return os << "(cpu " << r.cpu << ", mem " << r.mem << ")";
}

ResourceVector saturating_sub(const ResourceVector& a, const ResourceVector& b) noexcept {
  return {std::max(0.0, a.cpu - b.cpu), std::max(0.0, a.mem - b.mem)};
}

ResourceVector component_min(const ResourceVector& a, const ResourceVector& b) noexcept {
  return {std::min(a.cpu, b.cpu), std::min(a.mem, b.mem)};
}

ResourceVector component_max(const ResourceVector& a, const ResourceVector& b) noexcept {
  return {std::max(a.cpu, b.cpu), std::max(a.mem, b.mem)};
}

std::string to_string(Resource which) {
  return which == Resource::Cpu ? "cpu" : "mem";
}

ResourceVector UsageTrace::peak() const noexcept {
  ResourceVector out;
  for (const auto& s : samples) out = component_max(out, s);
  return out;
}

std::vector<double> UsageTrace::dimension(Resource which, std::size_t n) const {
  n = std::min(n, samples.size());
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(component(samples[i], which));
  return out;
}

void validate(const UsageTrace& trace) {
  if (trace.empty()) throw InvalidInput("usage trace is empty");
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (!trace[i].valid()) {
      throw InvalidInput("usage trace sample " + std::to_string(i) +
                         " is negative or not finite");
    }
  }
}

void validate(const JobSpec& job, double sample_period_s) {
  const std::string who = "job '" + job.id + "': ";
  if (job.id.empty()) throw InvalidInput("job id must not be empty");
  if (!job.requested.valid() || job.requested.cpu <= 0.0 || job.requested.mem <= 0.0) {
    throw InvalidInput(who + "requested cpu and mem must be positive");
  }
  if (job.duration_s <= 0) throw InvalidInput(who + "duration_s must be positive");
  try {
    validate(job.trace);
  } catch (const InvalidInput& e) {
    throw InvalidInput(who + e.what());
  }
  const double expected = static_cast<double>(job.duration_s) / sample_period_s;
  if (std::abs(expected - static_cast<double>(job.trace.size())) > 1e-9) {
    throw InvalidInput(who + "trace has " + std::to_string(job.trace.size()) +
                       " samples but duration implies " + std::to_string(expected));
  }
}

void validate(std::span<const JobSpec> jobs, double sample_period_s) {
  std::set<std::string> seen;
  for (const auto& job : jobs) {
    validate(job, sample_period_s);
    if (!seen.insert(job.id).second) {
      throw InvalidInput("duplicate job id '" + job.id + "'");
    }
  }
}

}  // namespace littlebig
