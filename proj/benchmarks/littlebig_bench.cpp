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
#include <benchmark/benchmark.h>

#include <vector>

#include "littlebig/engine.hpp"
#include "littlebig/estimator.hpp"
#include "littlebig/profiler.hpp"
#include "littlebig/random.hpp"
#include "littlebig/workload.hpp"

namespace littlebig {
namespace {

void BM_IsConverged(benchmark::State& state) {
  const auto kind = static_cast<ConvergencePredicate::Kind>(state.range(0));
  ConvergencePredicate predicate;
  predicate.kind = kind;
  Rng rng(1);
  std::vector<std::vector<double>> windows(1024);
  for (auto& w : windows) {
    for (int i = 0; i < 5; ++i) w.push_back(rng.uniform(90, 110));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_converged(windows[i++ % windows.size()], 5, predicate));
  }
}
BENCHMARK(BM_IsConverged)->Arg(0)->Arg(1);

void BM_EstimateStream(benchmark::State& state) {
  Rng rng(2);
  std::vector<double> feed;
  for (int i = 0; i < 150; ++i) feed.push_back(rng.uniform(0, 100));
  EstimatorOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_stream(feed, opts));
}
BENCHMARK(BM_EstimateStream);

void BM_ObserveNodeContended(benchmark::State& state) {
  Rng rng(3);
  std::vector<Resident> residents;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    residents.push_back({{rng.uniform(1, 4), 100}, {rng.uniform(0.5, 2), 100}});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(observe_node(ProfilingMode::CoScheduled, residents, {8, 16000}));
  }
}
BENCHMARK(BM_ObserveNodeContended)->Arg(4)->Arg(16);

void BM_RunQueue(benchmark::State& state) {
  const auto jobs = generate(WorkloadSpec{});
  ClusterConfig config;
  config.mode = static_cast<RunMode>(state.range(0));
  config = with_ratio(config, {1, 10});
  for (auto _ : state) benchmark::DoNotOptimize(run(config, jobs));
}
BENCHMARK(BM_RunQueue)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace littlebig

// The distro benchmark_main archive is LTO bytecode from another compiler.
BENCHMARK_MAIN();
