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
#include "littlebig/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <thread>

#include "littlebig/error.hpp"
#include "littlebig/random.hpp"

namespace littlebig {

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Default: return "default";
    case RunMode::ExclusiveAccess: return "exclusive";
    case RunMode::CoScheduled: return "coscheduled";
  }
  return "unknown";
}

RunMode parse_run_mode(const std::string& name) {
  if (name == "default") return RunMode::Default;
  if (name == "exclusive" || name == "exclusive-access") return RunMode::ExclusiveAccess;
  if (name == "coscheduled" || name == "co-scheduled") return RunMode::CoScheduled;
  throw ConfigError("unknown mode '" + name + "' (expected default|exclusive|coscheduled)");
}

std::string to_string(const Ratio& ratio) {
  return std::to_string(ratio.little) + ":" + std::to_string(ratio.big);
}

namespace {

int parse_positive(const std::string& text, const std::string& context) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
      })) {
    throw ConfigError("malformed " + context + " '" + text + "'");
  }
  int value = 0;
  try {
    value = std::stoi(text);
  } catch (const std::exception&) {
    throw ConfigError("malformed " + context + " '" + text + "'");
  }
  if (value < 1) throw ConfigError(context + " must be at least 1, got '" + text + "'");
  return value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Ratio parse_ratio(const std::string& raw) {
  const std::string text = trim(raw);
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("malformed ratio '" + text + "' (expected L:B)");
  const std::string where = "ratio '" + text + "'";
  return {parse_positive(text.substr(0, colon), where + " little side"),
          parse_positive(text.substr(colon + 1), where + " big side")};
}

std::vector<Ratio> parse_ratio_list(const std::string& raw) {
  const std::string text = trim(raw);
  std::vector<Ratio> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const Ratio first = parse_ratio(text.substr(0, dots));
    std::string rest = text.substr(dots + 2);
    int step = 1;
    // "1:12:2" -> last ratio 1:12, step 2
    if (const auto c1 = rest.find(':'); c1 != std::string::npos) {
      if (const auto c2 = rest.find(':', c1 + 1); c2 != std::string::npos) {
        step = parse_positive(rest.substr(c2 + 1), "ratio range step");
        rest = rest.substr(0, c2);
      }
    }
    const Ratio last = parse_ratio(rest);
    if (last.little != first.little || last.big < first.big) {
      throw ConfigError("malformed ratio range '" + text + "'");
    }
    for (int b = first.big; b <= last.big; b += step) out.push_back({first.little, b});
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = text.find(',', pos);
      const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!trim(item).empty()) out.push_back(parse_ratio(item));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (out.empty()) throw ConfigError("empty ratio list");
  return out;
}

void validate(const ClusterConfig& config) {
  if (config.big_nodes < 1) throw ConfigError("big_nodes must be at least 1");
  if (config.mode == RunMode::Default && config.little_nodes != 0) {
    throw ConfigError("default mode requires little_nodes = 0");
  }
  if (is_optimized(config.mode) && config.little_nodes < 1) {
    throw ConfigError("optimized modes require little_nodes >= 1");
  }
  if (!config.node_capacity.valid() || config.node_capacity.cpu <= 0.0 ||
      config.node_capacity.mem <= 0.0) {
    throw ConfigError("node capacity must be positive");
  }
  if (!(config.sample_period_s > 0.0)) throw ConfigError("sample_period_s must be positive");
  if (!(config.arrival_rate >= 0.0)) throw ConfigError("arrival_rate must be >= 0");
  if (config.max_ticks < 1) throw ConfigError("max_ticks must be positive");
  validate(config.estimator);
}

ClusterConfig with_ratio(ClusterConfig config, const Ratio& ratio) {
  config.big_nodes = ratio.big;
  config.little_nodes = is_optimized(config.mode) ? ratio.little : 0;
  return config;
}

int reported_cluster_size(const ClusterConfig& config) noexcept {
  const int overhead = is_optimized(config.mode) && config.optimizer_overhead_node ? 1 : 0;
  return config.little_nodes + config.big_nodes + overhead;
}

namespace {

std::vector<Tick> arrival_ticks(const ClusterConfig& config, std::size_t n) {
  std::vector<Tick> out(n, 0);
  if (config.arrival_rate <= 0.0) return out;
  Rng rng(config.seed);
  double t = 0.0;
  for (auto& a : out) {
    t += rng.exponential(config.arrival_rate);
    a = static_cast<Tick>(std::floor(t / config.sample_period_s));
  }
  return out;
}

}  // namespace

RunOutcome run(const ClusterConfig& config, std::span<const JobSpec> jobs,
               const TickObserver& observer) {
  validate(config);
  if (jobs.empty()) throw InvalidInput("run needs at least one job");
  validate(jobs, config.sample_period_s);

  const std::size_t n = jobs.size();
  RunOutcome out;
  out.config = config;
  out.jobs.resize(n);
  const auto arrivals = arrival_ticks(config, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.jobs[i].id = jobs[i].id;
    out.jobs[i].requested = jobs[i].requested;
    out.jobs[i].arrival = arrivals[i];
    out.jobs[i].profiled = is_optimized(config.mode);
  }

  const std::vector<NodeSpec> big_nodes(static_cast<std::size_t>(config.big_nodes),
                                        NodeSpec{config.node_capacity});
  out.big_capacity = config.node_capacity * static_cast<double>(config.big_nodes);
  out.per_node.resize(big_nodes.size());
  BigCluster big(big_nodes);

  std::optional<LittleCluster> little;
  if (is_optimized(config.mode)) {
    little.emplace(std::vector<NodeSpec>(static_cast<std::size_t>(config.little_nodes),
                                         NodeSpec{config.node_capacity}),
                   config.mode == RunMode::ExclusiveAccess ? ProfilingMode::Exclusive
                                                           : ProfilingMode::CoScheduled,
                   config.estimator);
  }

  std::vector<ProfilingResult> ready;  // waiting for their ready_at tick
  std::size_t next_arrival = 0;
  std::size_t terminal = 0;
  Tick last_event = 0;

  for (Tick now = 0; terminal < n; ++now) {
    if (now >= config.max_ticks) {
      throw InvariantViolation("simulation exceeded max_ticks without draining");
    }

    // 0. arrivals
    while (next_arrival < n && arrivals[next_arrival] <= now) {
      const std::size_t i = next_arrival++;
      if (little) {
        little->submit(i, jobs[i]);
      } else {
        big.enqueue({i, jobs[i].requested, jobs[i].duration_s, false});
        out.jobs[i].enqueued_at = now;
      }
    }

    // 1. profiler
    if (little) {
      auto results = little->step(now);
      if (little->busy_last_step()) ++out.profiling_wall_ticks;
      for (auto& r : results) ready.push_back(std::move(r));
    }

    // 2. enqueue ready estimates, in completion order
    {
      std::vector<ProfilingResult> later;
      for (auto& r : ready) {
        if (r.ready_at > now) {
          later.push_back(std::move(r));
          continue;
        }
        auto& rec = out.jobs[r.job_index];
        rec.bypassed = r.bypassed;
        rec.bypass_reason = r.bypass_reason;
        rec.cpu_estimate = r.cpu_estimate;
        rec.mem_estimate = r.mem_estimate;
        rec.profiling_ticks = r.profiling_ticks;
        rec.enqueued_at = now;
        const auto& job = jobs[r.job_index];
        big.enqueue({r.job_index, r.bypassed ? job.requested : r.allocation(), job.duration_s,
                     false});
      }
      ready = std::move(later);
    }

    // 3. placement
    auto pass = big.place(now);
    for (const auto& p : pass.placed) {
      auto& rec = out.jobs[p.job.job];
      rec.allocation = p.job.allocation;
      rec.node = static_cast<int>(p.node);
      rec.start = now;
      rec.status = JobStatus::Running;
    }
    for (const auto& u : pass.unschedulable) {
      auto& rec = out.jobs[u.job];
      rec.allocation = u.allocation;
      rec.status = JobStatus::Unschedulable;
      ++out.unschedulable;
      ++terminal;
    }

    // 4. demand replay and enforcement
    const auto& running = big.running();
    std::vector<ResourceVector> demands;
    demands.reserve(running.size());
    for (const auto& r : running) {
      demands.push_back(jobs[r.job].trace[static_cast<std::size_t>(now - r.start)]);
    }
    const auto kills = enforce_tick(running, demands);

    TickUsage total;
    for (std::size_t nidx = 0; nidx < big.nodes().size(); ++nidx) {
      TickUsage u;
      u.allocated = big.nodes()[nidx].allocated;
      for (std::size_t r = 0; r < running.size(); ++r) {
        if (running[r].node == nidx) u.used += component_min(demands[r], running[r].allocation);
      }
      out.per_node[nidx].push_back(u);
      total.used += u.used;
      total.allocated += u.allocated;
    }
    out.aggregate.push_back(total);

    std::vector<bool> killed(running.size(), false);
    for (const auto& k : kills) killed[k.running_index] = true;

    if (config.check_invariants) big.check_invariants();
    if (observer) {
      TickSnapshot snap;
      snap.now = now;
      snap.nodes = big.nodes();
      for (std::size_t r = 0; r < running.size(); ++r) {
        snap.running.push_back(
            {running[r].job, running[r].node, running[r].allocation, demands[r], killed[r]});
      }
      if (little) {
        for (std::size_t l = 0; l < little->nodes().size(); ++l) {
          snap.little_reserved.push_back(little->reserved(l));
          snap.little_capacity.push_back(little->nodes()[l].capacity);
        }
      }
      observer(snap);
    }

    // 5. kills and completions free capacity at the end of the tick
    const auto completions = complete_tick(running, now);
    std::vector<bool> leaving(running.size(), false);
    for (const auto& k : kills) leaving[k.running_index] = true;
    for (auto c : completions) leaving[c] = true;

    for (std::size_t r = running.size(); r-- > 0;) {
      if (!leaving[r]) continue;
      const RunningJob job = big.release(r);
      auto& rec = out.jobs[job.job];
      if (killed[r]) {
        ++rec.kills;
        ++out.kills;
        const auto d = handle_kill(job, config.kill_policy, jobs[job.job].requested);
        if (d.status == JobStatus::Retried) {
          rec.retried = true;
          rec.status = JobStatus::Retried;
          ++out.retries;
          big.enqueue(d.requeue);
          continue;
        }
        rec.status = JobStatus::Killed;
      } else {
        rec.status = JobStatus::Completed;
        rec.completed_running_ticks = now - job.start + 1;
      }
      rec.finish = now + 1;
      last_event = std::max(last_event, now + 1);
      ++terminal;
    }
    if (config.check_invariants) big.check_invariants();
  }

  out.makespan = last_event;
  for (auto& series : out.per_node) series.resize(static_cast<std::size_t>(out.makespan));
  out.aggregate.resize(static_cast<std::size_t>(out.makespan));
  return out;
}

std::vector<SweepEntry> sweep(const ClusterConfig& base, std::span<const Ratio> ratios,
                              std::span<const RunMode> modes, std::span<const JobSpec> jobs,
                              unsigned parallel, const SweepCallback& on_complete) {
  if (ratios.empty()) throw ConfigError("sweep needs at least one ratio");
  if (modes.empty()) throw ConfigError("sweep needs at least one mode");

  std::vector<SweepEntry> entries;
  std::vector<ClusterConfig> configs;
  for (const auto& ratio : ratios) {
    for (auto mode : modes) {
      ClusterConfig c = base;
      c.mode = mode;
      c = with_ratio(c, ratio);
      validate(c);
      configs.push_back(c);
      entries.push_back({ratio, mode, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(entries.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        entries[i].outcome = run(configs[i], jobs);
        if (on_complete) on_complete(entries[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(parallel, static_cast<unsigned>(entries.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return entries;
}

LimitationComparison limitation_scenario(const ClusterConfig& config,
                                         std::span<const JobSpec> jobs) {
  LimitationComparison cmp;
  if (jobs.empty()) return cmp;
  for (const auto& j : jobs) {
    const auto peak = j.trace.peak();
    const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    if (!close(j.requested.cpu, peak.cpu) || !close(j.requested.mem, peak.mem)) {
      throw InvalidInput("limitation scenario expects requests equal to peak demand; job '" +
                         j.id + "' differs");
    }
  }
  const int little = std::max(1, config.little_nodes);

  ClusterConfig d = config;
  d.mode = RunMode::Default;
  d.little_nodes = 0;
  cmp.default_makespan = run(d, jobs).makespan;

  ClusterConfig e = config;
  e.mode = RunMode::ExclusiveAccess;
  e.little_nodes = little;
  cmp.exclusive_makespan = run(e, jobs).makespan;

  ClusterConfig c = config;
  c.mode = RunMode::CoScheduled;
  c.little_nodes = little;
  cmp.coscheduled_makespan = run(c, jobs).makespan;
  return cmp;
}

}  // namespace littlebig
