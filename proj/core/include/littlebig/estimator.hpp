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

// Statistical right-sizing of a single resource dimension.
//
// Samples are collected in fixed-size windows. After each full window the
// latest window is tested for convergence; a converged window yields
//
//   optimal = median(window) + sample_stddev(window)
//
// where the standard deviation is the headroom ("buffer") that keeps the job
// from being killed for small excursions above its median.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "littlebig/resource.hpp"

namespace littlebig {

/// Sample standard deviation with the N-1 denominator. Requires N >= 2.
double sample_stddev(std::span<const double> observations);

/// Middle element for odd N, mean of the two middle elements for even N.
double median(std::span<const double> observations);

struct Estimate {
  double median = 0.0;
  double buffer = 0.0;
  double optimal = 0.0;
  std::size_t samples_used = 0;
  /// False only when the estimate came from the max-windows or end-of-feed
  /// fallback over every sample seen.
  bool converged = true;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// median + sample_stddev over the observations. Requires N >= 2.
Estimate optimal_resource(std::span<const double> observations);

struct ConvergencePredicate {
  enum class Kind {
    /// Majority of samples inside x̄ ± z·s/√N (confidence interval of the mean).
    ConfidenceInterval,
    /// Majority of samples inside median·(1 ± epsilon).
    RelativeBand,
  };

  Kind kind = Kind::RelativeBand;
  double band_epsilon = 0.05;
  double z = 1.96;

  static ConvergencePredicate confidence_interval(double z = 1.96) {
    return {Kind::ConfidenceInterval, 0.05, z};
  }
  static ConvergencePredicate relative_band(double epsilon = 0.05) {
    return {Kind::RelativeBand, epsilon, 1.96};
  }

  friend bool operator==(const ConvergencePredicate&, const ConvergencePredicate&) = default;
};

/// "paper" or "band".
std::string to_string(ConvergencePredicate::Kind kind);
/// Accepts "paper", "ci", "band", "relative-band". Throws ConfigError otherwise.
ConvergencePredicate::Kind parse_predicate_kind(const std::string& name);

/// At least ceil(window_size / 2) samples.
constexpr std::size_t majority_of(std::size_t window_size) noexcept {
  return (window_size + 1) / 2;
}

/// Tests the window against the predicate. The window must hold exactly
/// window_size samples; anything else is an InvalidInput error.
bool is_converged(std::span<const double> window, std::size_t window_size,
                  const ConvergencePredicate& predicate);

struct EstimatorOptions {
  std::size_t window_size = 5;
  std::size_t max_windows = 30;
  ConvergencePredicate predicate;

  friend bool operator==(const EstimatorOptions&, const EstimatorOptions&) = default;
};

/// Throws ConfigError for a window smaller than 2 or zero max_windows.
void validate(const EstimatorOptions& options);

/// Incremental form of the estimator, fed one sample per tick.
class StreamEstimator {
 public:
  explicit StreamEstimator(EstimatorOptions options);

  /// Records a sample. Returns the estimate on the sample that concludes the
  /// stream (convergence, or max_windows exhausted); nullopt otherwise.
  /// Samples pushed after the stream has concluded are ignored.
  std::optional<Estimate> push(double sample);

  /// The feed ended. Returns the estimate if already concluded, otherwise the
  /// fallback over every sample seen (converged=false). Throws InvalidInput if
  /// fewer than one full window was seen.
  Estimate finish();

  bool done() const noexcept { return result_.has_value(); }
  const std::optional<Estimate>& result() const noexcept { return result_; }
  std::size_t samples_seen() const noexcept { return samples_.size(); }

  /// The window the converged estimate was computed over, or every sample
  /// seen for the fallback. Empty while running.
  std::span<const double> estimate_window() const noexcept;

  const EstimatorOptions& options() const noexcept { return options_; }

 private:
  Estimate fallback();

  EstimatorOptions options_;
  std::vector<double> samples_;
  std::optional<Estimate> result_;
  std::size_t window_begin_ = 0;
};

/// Runs a StreamEstimator over a finite feed.
Estimate estimate_stream(std::span<const double> feed, const EstimatorOptions& options);

struct JobEstimate {
  Estimate cpu;
  Estimate mem;
  /// max(cpu.samples_used, mem.samples_used).
  std::size_t profiling_ticks = 0;

  ResourceVector optimal() const noexcept { return {cpu.optimal, mem.optimal}; }
  bool converged() const noexcept { return cpu.converged && mem.converged; }

  friend bool operator==(const JobEstimate&, const JobEstimate&) = default;
};

/// Independent per-dimension estimates from a trace prefix.
JobEstimate estimate_job(const UsageTrace& trace_prefix, const EstimatorOptions& options);

/// Whole-core reporting. Not used for allocation.
enum class CpuRounding { None, Ceil };
double round_cores(double cores, CpuRounding rounding) noexcept;

}  // namespace littlebig
