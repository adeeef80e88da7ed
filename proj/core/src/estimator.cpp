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
#include "littlebig/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "littlebig/error.hpp"

namespace littlebig {

double sample_stddev(std::span<const double> observations) {
  const std::size_t n = observations.size();
  if (n < 2) throw InvalidInput("sample_stddev needs at least 2 observations");
  const double mean =
      std::accumulate(observations.begin(), observations.end(), 0.0) / static_cast<double>(n);
  double sum_sq = 0.0;
  for (double x : observations) sum_sq += (x - mean) * (x - mean);
  return std::sqrt(sum_sq / static_cast<double>(n - 1));
}

double median(std::span<const double> observations) {
  if (observations.empty()) throw InvalidInput("median of an empty sequence");
  std::vector<double> sorted(observations.begin(), observations.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

Estimate optimal_resource(std::span<const double> observations) {
  if (observations.size() < 2) {
    throw InvalidInput("optimal_resource needs at least 2 observations");
  }
  Estimate e;
  e.median = median(observations);
  e.buffer = sample_stddev(observations);
  e.optimal = e.median + e.buffer;
  e.samples_used = observations.size();
  e.converged = true;
  return e;
}

std::string to_string(ConvergencePredicate::Kind kind) {
  return kind == ConvergencePredicate::Kind::ConfidenceInterval ? "paper" : "band";
}

ConvergencePredicate::Kind parse_predicate_kind(const std::string& name) {
  if (name == "paper" || name == "ci") return ConvergencePredicate::Kind::ConfidenceInterval;
  if (name == "band" || name == "relative-band") return ConvergencePredicate::Kind::RelativeBand;
  throw ConfigError("unknown convergence predicate '" + name + "' (expected paper|band)");
}

bool is_converged(std::span<const double> window, std::size_t window_size,
                  const ConvergencePredicate& predicate) {
  if (window.size() != window_size) {
    throw InvalidInput("convergence test expects exactly " + std::to_string(window_size) +
                       " samples, got " + std::to_string(window.size()));
  }
  if (window_size == 0) throw InvalidInput("window size must be positive");

  // Zero spread is the ideal case; rounding in the mean must not reject it.
  const auto [min_it, max_it] = std::minmax_element(window.begin(), window.end());
  if (*min_it == *max_it) return true;

  double lo = 0.0;
  double hi = 0.0;
  if (predicate.kind == ConvergencePredicate::Kind::ConfidenceInterval) {
    const double n = static_cast<double>(window.size());
    const double mean = std::accumulate(window.begin(), window.end(), 0.0) / n;
    const double s = window.size() >= 2 ? sample_stddev(window) : 0.0;
    const double half = predicate.z * s / std::sqrt(n);
    lo = mean - half;
    hi = mean + half;
  } else {
    const double m = median(window);
    lo = m * (1.0 - predicate.band_epsilon);
    hi = m * (1.0 + predicate.band_epsilon);
  }
  const auto inside = std::count_if(window.begin(), window.end(),
                                    [&](double x) { return x >= lo && x <= hi; });
  return static_cast<std::size_t>(inside) >= majority_of(window_size);
}

void validate(const EstimatorOptions& options) {
  if (options.window_size < 2) throw ConfigError("window_size must be at least 2");
  if (options.max_windows < 1) throw ConfigError("max_windows must be at least 1");
  if (!(options.predicate.band_epsilon >= 0.0)) throw ConfigError("band epsilon must be >= 0");
  if (!(options.predicate.z > 0.0)) throw ConfigError("confidence z must be positive");
}

StreamEstimator::StreamEstimator(EstimatorOptions options) : options_(options) {
  validate(options_);
  samples_.reserve(options_.window_size);
}

std::optional<Estimate> StreamEstimator::push(double sample) {
  if (result_) return std::nullopt;
  if (!(sample >= 0.0) || !std::isfinite(sample)) {
    throw InvalidInput("observations must be finite and non-negative");
  }
  samples_.push_back(sample);

  const std::size_t w = options_.window_size;
  if (samples_.size() % w != 0) return std::nullopt;

  const std::span<const double> latest(samples_.data() + samples_.size() - w, w);
  if (is_converged(latest, w, options_.predicate)) {
    Estimate e = optimal_resource(latest);
    e.samples_used = samples_.size();
    e.converged = true;
    window_begin_ = samples_.size() - w;
    result_ = e;
    return result_;
  }
  if (samples_.size() / w >= options_.max_windows) {
    result_ = fallback();
    return result_;
  }
  return std::nullopt;
}

Estimate StreamEstimator::finish() {
  if (result_) return *result_;
  if (samples_.size() < options_.window_size) {
    throw InvalidInput("feed ended after " + std::to_string(samples_.size()) +
                       " samples, before one full window of " +
                       std::to_string(options_.window_size));
  }
  result_ = fallback();
  return *result_;
}

std::span<const double> StreamEstimator::estimate_window() const noexcept {
  if (!result_) return {};
  return std::span<const double>(samples_).subspan(window_begin_);
}

Estimate StreamEstimator::fallback() {
  Estimate e = optimal_resource(samples_);
  e.samples_used = samples_.size();
  e.converged = false;
  window_begin_ = 0;
  return e;
}

Estimate estimate_stream(std::span<const double> feed, const EstimatorOptions& options) {
  StreamEstimator stream(options);
  for (double x : feed) {
    if (auto e = stream.push(x)) return *e;
  }
  return stream.finish();
}

JobEstimate estimate_job(const UsageTrace& trace_prefix, const EstimatorOptions& options) {
  JobEstimate out;
  out.cpu = estimate_stream(trace_prefix.dimension(Resource::Cpu), options);
  out.mem = estimate_stream(trace_prefix.dimension(Resource::Mem), options);
  out.profiling_ticks = std::max(out.cpu.samples_used, out.mem.samples_used);
  return out;
}

double round_cores(double cores, CpuRounding rounding) noexcept {
  return rounding == CpuRounding::Ceil ? std::ceil(cores) : cores;
}

}  // namespace littlebig
