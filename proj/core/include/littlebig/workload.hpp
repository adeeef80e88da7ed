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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "littlebig/resource.hpp"

namespace littlebig {

/// Steady-state usage of one benchmark, as measured by a full static run.
struct PresetProfile {
  std::string name;
  double steady_mem_mb = 0.0;
  double steady_cpu_cores = 0.0;

  ResourceVector steady() const noexcept { return {steady_cpu_cores, steady_mem_mb}; }
};

/// The nine built-in PARSEC/DGEMM profiles, in canonical order.
std::span<const PresetProfile> builtin_presets();

/// Case-insensitive lookup. Throws ConfigError listing the valid names.
const PresetProfile& find_preset(std::string_view name);

/// "parsec" (all nine, cycled) or a comma list of preset names.
std::vector<std::string> resolve_preset_mix(std::string_view mix);

enum class TraceShape {
  Constant,
  /// Linear ramp from a quarter of steady up to steady, then flat.
  RampThenSteady,
  /// Steady level with multiplicative gaussian noise.
  NoisySteady,
  /// Steady level with occasional multiplicative spikes.
  Spiky,
};

std::string to_string(TraceShape shape);
TraceShape parse_trace_shape(const std::string& name);

/// Steady levels drawn uniformly between two corners, for non-preset queues.
struct SyntheticLevels {
  ResourceVector min_steady{0.5, 100.0};
  ResourceVector max_steady{4.0, 4000.0};
};

struct WorkloadSpec {
  std::size_t count = 90;
  /// Preset names, cycled in order. Ignored when synthetic is set.
  std::vector<std::string> presets = resolve_preset_mix("parsec");
  std::optional<SyntheticLevels> synthetic;
  /// request = peak * (1 + overestimate_factor) per dimension.
  double overestimate_factor = 0.5;
  std::int64_t duration_min_s = 60;
  std::int64_t duration_max_s = 300;
  TraceShape shape = TraceShape::Constant;
  double noise = 0.05;
  double spike_probability = 0.05;
  double spike_factor = 1.5;
  std::int64_t ramp_s = 10;
  double sample_period_s = 1.0;
  std::uint64_t seed = 42;
};

/// Throws ConfigError on an inconsistent spec.
void validate(const WorkloadSpec& spec);

/// Deterministic job list: a pure function of spec (including its seed).
std::vector<JobSpec> generate(const WorkloadSpec& spec);

/// Parses a trace CSV with header "time_s,cpu_cores,mem_mb". Rows must be
/// ascending and uniformly spaced. Throws ParseError naming the line.
UsageTrace parse_trace_csv(std::istream& in);
UsageTrace load_trace(const std::string& path);
void save_trace(const std::string& path, const UsageTrace& trace, double sample_period_s = 1.0);

inline constexpr int kJobsFormatVersion = 1;

/// {format_version: 1, jobs: [{id, requested:{cpu,mem}, duration_s, trace:[[cpu,mem],...]}]}
std::string jobs_to_json(std::span<const JobSpec> jobs);
/// Throws UnsupportedVersion, ParseError or InvalidInput.
std::vector<JobSpec> jobs_from_json(std::string_view text);

void save_jobs(const std::string& path, std::span<const JobSpec> jobs);
std::vector<JobSpec> load_jobs(const std::string& path);

/// Writes via a temporary file and rename, so readers never see partial output.
void write_file_atomic(const std::string& path, std::string_view contents);
std::string read_file(const std::string& path);

}  // namespace littlebig
