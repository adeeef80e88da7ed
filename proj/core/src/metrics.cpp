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
#include "littlebig/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "littlebig/error.hpp"
#include "littlebig/workload.hpp"

namespace littlebig {

using nlohmann::json;

std::string to_string(ErrorConvention convention) {
  return convention == ErrorConvention::RelativeToPartial ? "relative_to_partial"
                                                          : "relative_to_full";
}

double accuracy(double full_run_value, double partial_run_value, ErrorConvention convention) {
  if (!(full_run_value > 0.0) || !(partial_run_value > 0.0)) {
    throw InvalidInput("accuracy needs positive full and partial values");
  }
  const double diff = std::abs(full_run_value - partial_run_value);
  return convention == ErrorConvention::RelativeToPartial ? diff / partial_run_value
                                                          : diff / full_run_value;
}

std::vector<double> utilization_series(const RunOutcome& outcome, Resource dimension,
                                       UtilizationBasis basis) {
  const double capacity = component(outcome.big_capacity, dimension);
  // The busy interval opens at the first submission.
  Tick first = outcome.jobs.empty() ? 0 : outcome.jobs.front().arrival;
  for (const auto& j : outcome.jobs) first = std::min(first, j.arrival);
  const auto skip = std::min(outcome.aggregate.size(), static_cast<std::size_t>(std::max<Tick>(first, 0)));
  std::vector<double> out;
  out.reserve(outcome.aggregate.size() - skip);
  for (const auto& u : std::span(outcome.aggregate).subspan(skip)) {
    const auto& v = basis == UtilizationBasis::Usage ? u.used : u.allocated;
    out.push_back(capacity > 0.0 ? component(v, dimension) / capacity : 0.0);
  }
  return out;
}

namespace {

double percentile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

SeriesStats summarize_series(std::span<const double> series) {
  SeriesStats s;
  if (series.empty()) return s;
  s.mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  std::vector<double> copy(series.begin(), series.end());
  s.p50 = percentile(copy, 0.50);
  s.p95 = percentile(copy, 0.95);
  return s;
}

AccuracyRecord job_accuracy(const UsageTrace& full_trace, const ResourceVector& estimate) {
  AccuracyRecord r;
  auto full_value = [&](Resource which) {
    const auto xs = full_trace.dimension(which);
    return xs.size() >= 2 ? optimal_resource(xs).optimal : xs.at(0);
  };
  r.full_run = {full_value(Resource::Cpu), full_value(Resource::Mem)};
  r.partial_run = estimate;
  auto err = [](double full, double partial, ErrorConvention c) {
    if (full <= 0.0 || partial <= 0.0) return full == partial ? 0.0 : 1.0;
    return accuracy(full, partial, c);
  };
  for (auto c : {ErrorConvention::RelativeToPartial, ErrorConvention::RelativeToFull}) {
    ResourceVector e{err(r.full_run.cpu, r.partial_run.cpu, c),
                     err(r.full_run.mem, r.partial_run.mem, c)};
    (c == ErrorConvention::RelativeToPartial ? r.error_relative_to_partial
                                             : r.error_relative_to_full) = e;
  }
  return r;
}

SimReport summarize(const RunOutcome& outcome, std::span<const JobSpec> jobs) {
  if (jobs.size() != outcome.jobs.size()) {
    throw InvalidInput("summarize: job list does not match the outcome");
  }
  SimReport r;
  r.config = outcome.config;
  r.cluster_size_nodes = reported_cluster_size(outcome.config);
  r.job_count = outcome.jobs.size();
  r.makespan_ticks = outcome.makespan;
  r.makespan_excluding_profiling_ticks = outcome.makespan_excluding_profiling();
  r.profiling_wall_ticks = outcome.profiling_wall_ticks;
  r.makespan_s = static_cast<double>(outcome.makespan) * outcome.config.sample_period_s;

  const auto stats = [&](Resource d, UtilizationBasis b) {
    return summarize_series(utilization_series(outcome, d, b));
  };
  r.cpu_usage = stats(Resource::Cpu, UtilizationBasis::Usage);
  r.cpu_allocation = stats(Resource::Cpu, UtilizationBasis::Allocation);
  r.mem_usage = stats(Resource::Mem, UtilizationBasis::Usage);
  r.mem_allocation = stats(Resource::Mem, UtilizationBasis::Allocation);

  for (const auto& u : outcome.aggregate) {
    r.unused_area.cpu += (u.allocated.cpu - u.used.cpu) * outcome.config.sample_period_s;
    r.unused_area.mem += (u.allocated.mem - u.used.mem) * outcome.config.sample_period_s;
  }
  r.kills = outcome.kills;
  r.retries = outcome.retries;
  r.unschedulable = outcome.unschedulable;

  std::size_t profiled = 0;
  for (std::size_t i = 0; i < outcome.jobs.size(); ++i) {
    const auto& rec = outcome.jobs[i];
    JobReport j;
    j.id = rec.id;
    j.status = rec.status;
    j.requested = rec.requested;
    j.allocation = rec.allocation;
    j.cpu_estimate = rec.cpu_estimate;
    j.mem_estimate = rec.mem_estimate;
    j.profiling_ticks = rec.profiling_ticks;
    j.enqueued_at = rec.enqueued_at;
    j.start = rec.start;
    j.finish = rec.finish;
    j.node = rec.node;
    j.kills = rec.kills;
    j.retried = rec.retried;
    j.bypassed = rec.bypassed;
    if (rec.profiled && !rec.bypassed && rec.cpu_estimate && rec.mem_estimate) {
      j.accuracy = job_accuracy(jobs[i].trace, {rec.cpu_estimate->optimal, rec.mem_estimate->optimal});
      r.mean_error_relative_to_partial += j.accuracy->error_relative_to_partial;
      r.mean_error_relative_to_full += j.accuracy->error_relative_to_full;
      ++profiled;
    }
    r.jobs.push_back(std::move(j));
  }
  if (profiled > 0) {
    const double k = 1.0 / static_cast<double>(profiled);
    r.mean_error_relative_to_partial = r.mean_error_relative_to_partial * k;
    r.mean_error_relative_to_full = r.mean_error_relative_to_full * k;
  }
  r.accuracy_relative_to_partial = {1.0 - r.mean_error_relative_to_partial.cpu,
                                    1.0 - r.mean_error_relative_to_partial.mem};
  r.accuracy_relative_to_full = {1.0 - r.mean_error_relative_to_full.cpu,
                                 1.0 - r.mean_error_relative_to_full.mem};
  return r;
}

// JSON mapping. Field names are the on-disk schema.

void to_json(json& j, const ResourceVector& r) { j = json{{"cpu", r.cpu}, {"mem", r.mem}}; }
void from_json(const json& j, ResourceVector& r) {
  r.cpu = j.at("cpu").get<double>();
  r.mem = j.at("mem").get<double>();
}

void to_json(json& j, const Estimate& e) {
  j = json{{"median", e.median},           {"buffer", e.buffer},
           {"optimal", e.optimal},         {"samples_used", e.samples_used},
           {"converged", e.converged}};
}
void from_json(const json& j, Estimate& e) {
  e.median = j.at("median").get<double>();
  e.buffer = j.at("buffer").get<double>();
  e.optimal = j.at("optimal").get<double>();
  e.samples_used = j.at("samples_used").get<std::size_t>();
  e.converged = j.at("converged").get<bool>();
}

void to_json(json& j, const SeriesStats& s) {
  j = json{{"mean", s.mean}, {"p50", s.p50}, {"p95", s.p95}};
}
void from_json(const json& j, SeriesStats& s) {
  s.mean = j.at("mean").get<double>();
  s.p50 = j.at("p50").get<double>();
  s.p95 = j.at("p95").get<double>();
}

void to_json(json& j, const AccuracyRecord& a) {
  j = json{{"full_run", a.full_run},
           {"partial_run", a.partial_run},
           {"error_relative_to_partial", a.error_relative_to_partial},
           {"error_relative_to_full", a.error_relative_to_full}};
}
void from_json(const json& j, AccuracyRecord& a) {
  a.full_run = j.at("full_run").get<ResourceVector>();
  a.partial_run = j.at("partial_run").get<ResourceVector>();
  a.error_relative_to_partial = j.at("error_relative_to_partial").get<ResourceVector>();
  a.error_relative_to_full = j.at("error_relative_to_full").get<ResourceVector>();
}

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

JobStatus parse_status(const std::string& s) {
  for (auto st : {JobStatus::Pending, JobStatus::Running, JobStatus::Completed, JobStatus::Killed,
                  JobStatus::Retried, JobStatus::Unschedulable}) {
    if (to_string(st) == s) return st;
  }
  throw ParseError(0, "unknown job status '" + s + "'");
}

json config_json(const ClusterConfig& c) {
  return json{{"mode", to_string(c.mode)},
              {"little_nodes", c.little_nodes},
              {"big_nodes", c.big_nodes},
              {"node_cpu", c.node_capacity.cpu},
              {"node_mem", c.node_capacity.mem},
              {"optimizer_overhead_node", c.optimizer_overhead_node},
              {"sample_period_s", c.sample_period_s},
              {"window_size", c.estimator.window_size},
              {"max_windows", c.estimator.max_windows},
              {"predicate", to_string(c.estimator.predicate.kind)},
              {"band_epsilon", c.estimator.predicate.band_epsilon},
              {"confidence_z", c.estimator.predicate.z},
              {"kill_policy", to_string(c.kill_policy)},
              {"seed", c.seed},
              {"arrival_rate", c.arrival_rate},
              {"check_invariants", c.check_invariants},
              {"max_ticks", c.max_ticks}};
}

// Applies every key of j on top of c.
ClusterConfig overlay_config(ClusterConfig c, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "mode") c.mode = parse_run_mode(value.get<std::string>());
    else if (key == "little_nodes") c.little_nodes = value.get<int>();
    else if (key == "big_nodes") c.big_nodes = value.get<int>();
    else if (key == "node_cpu") c.node_capacity.cpu = value.get<double>();
    else if (key == "node_mem") c.node_capacity.mem = value.get<double>();
    else if (key == "optimizer_overhead_node") c.optimizer_overhead_node = value.get<bool>();
    else if (key == "sample_period_s") c.sample_period_s = value.get<double>();
    else if (key == "window_size") c.estimator.window_size = value.get<std::size_t>();
    else if (key == "max_windows") c.estimator.max_windows = value.get<std::size_t>();
    else if (key == "predicate") c.estimator.predicate.kind = parse_predicate_kind(value.get<std::string>());
    else if (key == "band_epsilon") c.estimator.predicate.band_epsilon = value.get<double>();
    else if (key == "confidence_z") c.estimator.predicate.z = value.get<double>();
    else if (key == "kill_policy") c.kill_policy = parse_kill_policy(value.get<std::string>());
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "arrival_rate") c.arrival_rate = value.get<double>();
    else if (key == "check_invariants") c.check_invariants = value.get<bool>();
    else if (key == "max_ticks") c.max_ticks = value.get<Tick>();
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

ClusterConfig config_from(const json& j) {
  try {
    return overlay_config(ClusterConfig{}, j);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("bad config in report: ") + e.what());
  }
}

}  // namespace

std::string config_to_json(const ClusterConfig& config) { return config_json(config).dump(2) + "\n"; }

ClusterConfig config_from_json(std::string_view text, const ClusterConfig& base) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    return overlay_config(base, doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

ClusterConfig load_config(const std::string& path, const ClusterConfig& base) {
  return config_from_json(read_file(path), base);
}

std::string report_to_json(const SimReport& r) {
  json jobs = json::array();
  for (const auto& j : r.jobs) {
    jobs.push_back(json{{"id", j.id},
                        {"status", to_string(j.status)},
                        {"requested", j.requested},
                        {"allocation", j.allocation},
                        {"cpu_estimate", optional_json(j.cpu_estimate)},
                        {"mem_estimate", optional_json(j.mem_estimate)},
                        {"profiling_ticks", j.profiling_ticks},
                        {"enqueued_at", j.enqueued_at},
                        {"start", j.start},
                        {"finish", j.finish},
                        {"node", j.node},
                        {"kills", j.kills},
                        {"retried", j.retried},
                        {"bypassed", j.bypassed},
                        {"accuracy", optional_json(j.accuracy)}});
  }
  json doc{{"schema_version", r.schema_version},
           {"complete", r.complete},
           {"config", config_json(r.config)},
           {"cluster_size_nodes", r.cluster_size_nodes},
           {"job_count", r.job_count},
           {"makespan_ticks", r.makespan_ticks},
           {"makespan_excluding_profiling_ticks", r.makespan_excluding_profiling_ticks},
           {"profiling_wall_ticks", r.profiling_wall_ticks},
           {"makespan_s", r.makespan_s},
           {"utilization",
            {{"cpu", {{"usage", r.cpu_usage}, {"allocation", r.cpu_allocation}}},
             {"mem", {{"usage", r.mem_usage}, {"allocation", r.mem_allocation}}}}},
           {"unused_area", {{"cpu_core_seconds", r.unused_area.cpu},
                            {"mem_mb_seconds", r.unused_area.mem}}},
           {"kills", r.kills},
           {"retries", r.retries},
           {"unschedulable", r.unschedulable},
           {"estimation",
            {{"mean_error_relative_to_partial", r.mean_error_relative_to_partial},
             {"mean_error_relative_to_full", r.mean_error_relative_to_full},
             {"accuracy_relative_to_partial", r.accuracy_relative_to_partial},
             {"accuracy_relative_to_full", r.accuracy_relative_to_full}}},
           {"jobs", std::move(jobs)}};
  return doc.dump(2) + "\n";
}

SimReport report_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version")) {
    throw ParseError(0, "report lacks schema_version");
  }
  if (doc["schema_version"] != kReportSchemaVersion) {
    throw UnsupportedVersion("unsupported report schema_version " + doc["schema_version"].dump());
  }
  SimReport r;
  try {
    r.schema_version = doc.at("schema_version").get<int>();
    r.complete = doc.at("complete").get<bool>();
    r.config = config_from(doc.at("config"));
    r.cluster_size_nodes = doc.at("cluster_size_nodes").get<int>();
    r.job_count = doc.at("job_count").get<std::size_t>();
    r.makespan_ticks = doc.at("makespan_ticks").get<Tick>();
    r.makespan_excluding_profiling_ticks = doc.at("makespan_excluding_profiling_ticks").get<Tick>();
    r.profiling_wall_ticks = doc.at("profiling_wall_ticks").get<Tick>();
    r.makespan_s = doc.at("makespan_s").get<double>();
    const auto& u = doc.at("utilization");
    r.cpu_usage = u.at("cpu").at("usage").get<SeriesStats>();
    r.cpu_allocation = u.at("cpu").at("allocation").get<SeriesStats>();
    r.mem_usage = u.at("mem").at("usage").get<SeriesStats>();
    r.mem_allocation = u.at("mem").at("allocation").get<SeriesStats>();
    r.unused_area = {doc.at("unused_area").at("cpu_core_seconds").get<double>(),
                     doc.at("unused_area").at("mem_mb_seconds").get<double>()};
    r.kills = doc.at("kills").get<std::size_t>();
    r.retries = doc.at("retries").get<std::size_t>();
    r.unschedulable = doc.at("unschedulable").get<std::size_t>();
    const auto& e = doc.at("estimation");
    r.mean_error_relative_to_partial = e.at("mean_error_relative_to_partial").get<ResourceVector>();
    r.mean_error_relative_to_full = e.at("mean_error_relative_to_full").get<ResourceVector>();
    r.accuracy_relative_to_partial = e.at("accuracy_relative_to_partial").get<ResourceVector>();
    r.accuracy_relative_to_full = e.at("accuracy_relative_to_full").get<ResourceVector>();
    for (const auto& j : doc.at("jobs")) {
      JobReport jr;
      jr.id = j.at("id").get<std::string>();
      jr.status = parse_status(j.at("status").get<std::string>());
      jr.requested = j.at("requested").get<ResourceVector>();
      jr.allocation = j.at("allocation").get<ResourceVector>();
      jr.cpu_estimate = optional_from<Estimate>(j, "cpu_estimate");
      jr.mem_estimate = optional_from<Estimate>(j, "mem_estimate");
      jr.profiling_ticks = j.at("profiling_ticks").get<Tick>();
      jr.enqueued_at = j.at("enqueued_at").get<Tick>();
      jr.start = j.at("start").get<Tick>();
      jr.finish = j.at("finish").get<Tick>();
      jr.node = j.at("node").get<int>();
      jr.kills = j.at("kills").get<int>();
      jr.retried = j.at("retried").get<bool>();
      jr.bypassed = j.at("bypassed").get<bool>();
      jr.accuracy = optional_from<AccuracyRecord>(j, "accuracy");
      r.jobs.push_back(std::move(jr));
    }
  } catch (const json::exception& ex) {
    throw ParseError(0, std::string("malformed report: ") + ex.what());
  }
  return r;
}

void emit_report(const SimReport& report, const std::string& path) {
  write_file_atomic(path, report_to_json(report));
}

SimReport load_report(const std::string& path) { return report_from_json(read_file(path)); }

std::vector<PlotRow> plot_rows(std::span<const SweepEntry> entries) {
  std::vector<PlotRow> rows;
  for (const auto& e : entries) {
    const auto& o = e.outcome;
    const std::string setup = to_string(e.ratio);
    const std::string mode = to_string(e.mode);
    const double period = o.config.sample_period_s;
    auto add = [&](const char* metric, double value) { rows.push_back({setup, mode, metric, value}); };
    add("runtime_s", static_cast<double>(o.makespan) * period);
    add("runtime_excluding_profiling_s", static_cast<double>(o.makespan_excluding_profiling()) * period);
    add("profiling_s", static_cast<double>(o.profiling_wall_ticks) * period);
    add("cpu_util", summarize_series(utilization_series(o, Resource::Cpu)).mean);
    add("mem_util", summarize_series(utilization_series(o, Resource::Mem)).mean);
    add("cpu_alloc_util",
        summarize_series(utilization_series(o, Resource::Cpu, UtilizationBasis::Allocation)).mean);
    add("mem_alloc_util",
        summarize_series(utilization_series(o, Resource::Mem, UtilizationBasis::Allocation)).mean);
    add("kills", static_cast<double>(o.kills));
    add("cluster_nodes", static_cast<double>(reported_cluster_size(o.config)));
  }
  return rows;
}

std::string plot_csv(std::span<const PlotRow> rows) {
  std::ostringstream os;
  os << std::setprecision(17) << "setup,mode,metric,value\n";
  for (const auto& r : rows) os << r.setup << ',' << r.mode << ',' << r.metric << ',' << r.value << '\n';
  return os.str();
}

void emit_plot_csv(std::span<const SweepEntry> entries, const std::string& path) {
  write_file_atomic(path, plot_csv(plot_rows(entries)));
}

std::string series_csv(const RunOutcome& outcome) {
  const auto cap = outcome.big_capacity;
  std::ostringstream os;
  os << std::setprecision(17)
     << "tick,cpu_used,cpu_allocated,mem_used,mem_allocated,cpu_util,mem_util,cpu_alloc_util,"
        "mem_alloc_util\n";
  for (std::size_t t = 0; t < outcome.aggregate.size(); ++t) {
    const auto& u = outcome.aggregate[t];
    os << t << ',' << u.used.cpu << ',' << u.allocated.cpu << ',' << u.used.mem << ','
       << u.allocated.mem << ',' << u.used.cpu / cap.cpu << ',' << u.used.mem / cap.mem << ','
       << u.allocated.cpu / cap.cpu << ',' << u.allocated.mem / cap.mem << '\n';
  }
  return os.str();
}

void emit_series_csv(const RunOutcome& outcome, const std::string& path) {
  write_file_atomic(path, series_csv(outcome));
}

}  // namespace littlebig
