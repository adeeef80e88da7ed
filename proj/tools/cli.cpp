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
#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "littlebig/engine.hpp"
#include "littlebig/error.hpp"
#include "littlebig/estimator.hpp"
#include "littlebig/metrics.hpp"
#include "littlebig/workload.hpp"

namespace littlebig::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kFileFormats = R"(File formats:
  config   flat JSON object keyed by cluster setting (comments allowed), e.g.
           {"mode": "coscheduled", "little_nodes": 1, "big_nodes": 10,
            "node_cpu": 8, "node_mem": 16000, "predicate": "band",
            "band_epsilon": 0.05, "window_size": 5, "max_windows": 30,
            "kill_policy": "retry", "seed": 0, "arrival_rate": 0}
           Precedence: flag > LITTLEBIG_<FLAG> environment variable > config > default.
  jobs     JSON {"format_version": 1, "jobs": [{"id", "requested": {"cpu", "mem"},
           "duration_s", "trace": [[cpu, mem], ...]}]}
  trace    CSV with header time_s,cpu_cores,mem_mb and uniform time steps
  report   JSON with "schema_version": 1
  plot     CSV setup,mode,metric,value
)";

std::string env_name(const std::string& flag) {
  std::string name = "LITTLEBIG_";
  for (char c : flag.substr(flag.find_first_not_of('-'))) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

template <typename T>
CLI::Option* add(CLI::App* app, const std::string& flag, T& target, const std::string& help) {
  return app->add_option(flag, target, help)->envname(env_name(flag));
}

/// Cluster flags shared by simulate and sweep. Unset flags leave the config
/// file (or built-in default) value alone.
struct ClusterFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> mode;
  std::optional<int> little_nodes;
  std::optional<int> big_nodes;
  std::optional<double> node_cpu;
  std::optional<double> node_mem;
  std::optional<std::string> predicate;
  std::optional<double> band_epsilon;
  std::optional<std::size_t> window;
  std::optional<std::size_t> max_windows;
  std::optional<std::string> kill_policy;
  std::optional<std::uint64_t> seed;
  std::optional<double> arrival_rate;
  std::optional<double> sample_period;
  bool no_optimizer_node = false;
  bool check_invariants = false;

  void attach(CLI::App* app, bool with_mode) {
    add(app, "--config", config_path, "Cluster config file (flat JSON)");
    if (with_mode) add(app, "--mode", mode, "default | exclusive | coscheduled");
    add(app, "--little-nodes", little_nodes, "Little (profiling) nodes");
    add(app, "--big-nodes", big_nodes, "Big (execution) nodes");
    add(app, "--node-cpu", node_cpu, "Cores per node (default 8)");
    add(app, "--node-mem", node_mem, "MB per node (default 16000)");
    add(app, "--predicate", predicate, "Convergence test: paper (CI of the mean) | band (median +/- epsilon); default band");
    add(app, "--band-epsilon", band_epsilon, "Relative band half-width (default 0.05)");
    add(app, "--window", window, "Samples per observation window (default 5)");
    add(app, "--max-windows", max_windows, "Windows before giving up on convergence (default 30)");
    add(app, "--kill-policy", kill_policy, "retry | fail (default retry)");
    add(app, "--seed", seed, "Seed for Poisson arrivals");
    add(app, "--arrival-rate", arrival_rate, "Poisson arrivals per second; 0 submits all at t=0");
    add(app, "--sample-period", sample_period, "Seconds per tick (default 1)");
    app->add_flag("--no-optimizer-node", no_optimizer_node,
                  "Do not count the optimizer host in the reported cluster size")
        ->envname(env_name("--no-optimizer-node"));
    app->add_flag("--check-invariants", check_invariants, "Verify scheduler bookkeeping every tick")
        ->envname(env_name("--check-invariants"));
  }

  ClusterConfig resolve() const {
    ClusterConfig c;
    if (config_path) {
      try {
        c = load_config(*config_path);
      } catch (const IoError& e) {
        throw ConfigError(e.what());
      }
    }
    if (mode) c.mode = parse_run_mode(*mode);
    if (little_nodes) c.little_nodes = *little_nodes;
    if (big_nodes) c.big_nodes = *big_nodes;
    if (node_cpu) c.node_capacity.cpu = *node_cpu;
    if (node_mem) c.node_capacity.mem = *node_mem;
    if (predicate) c.estimator.predicate.kind = parse_predicate_kind(*predicate);
    if (band_epsilon) c.estimator.predicate.band_epsilon = *band_epsilon;
    if (window) c.estimator.window_size = *window;
    if (max_windows) c.estimator.max_windows = *max_windows;
    if (kill_policy) c.kill_policy = parse_kill_policy(*kill_policy);
    if (seed) c.seed = *seed;
    if (arrival_rate) c.arrival_rate = *arrival_rate;
    if (sample_period) c.sample_period_s = *sample_period;
    if (no_optimizer_node) c.optimizer_overhead_node = false;
    if (check_invariants) c.check_invariants = true;
    return c;
  }
};

std::vector<JobSpec> read_jobs(const std::string& path) {
  if (!fs::exists(path)) throw IoError("jobs file '" + path + "' does not exist");
  return load_jobs(path);
}

std::string file_stem(const SweepEntry& e) {
  std::string ratio = to_string(e.ratio);
  std::replace(ratio.begin(), ratio.end(), ':', '-');
  return "run_" + ratio + "_" + to_string(e.mode);
}

json estimate_json(const Estimate& e) {
  return json{{"median", e.median},
              {"buffer", e.buffer},
              {"optimal", e.optimal},
              {"converged", e.converged},
              {"samples_used", e.samples_used}};
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

// --- simulate ---------------------------------------------------------------

struct SimulateCommand {
  ClusterFlags cluster;
  std::optional<std::string> ratio;
  std::string jobs_path;
  std::optional<std::string> out_path;
  std::optional<std::string> series_path;

  void attach(CLI::App* app) {
    cluster.attach(app, true);
    add(app, "--ratio", ratio, "little:big node ratio, e.g. 1:10 (Default mode uses only big)");
    add(app, "--jobs", jobs_path, "Job list JSON")->required();
    add(app, "--out", out_path, "Report JSON path (stdout if omitted)");
    add(app, "--series", series_path, "Per-tick utilization CSV path");
  }

  int execute(std::ostream& out, std::ostream&) const {
    ClusterConfig config = cluster.resolve();
    if (ratio) config = with_ratio(config, parse_ratio(*ratio));
    validate(config);
    const auto jobs = read_jobs(jobs_path);
    const auto outcome = run(config, jobs);
    const auto report = summarize(outcome, jobs);
    if (out_path) {
      emit_report(report, *out_path);
      out << to_string(config.mode) << " makespan " << report.makespan_s << " s, cpu util "
          << report.cpu_usage.mean << ", mem util " << report.mem_usage.mean << ", kills "
          << report.kills << "\n";
    } else {
      out << report_to_json(report);
    }
    if (series_path) emit_series_csv(outcome, *series_path);
    return kOk;
  }
};

// --- sweep ------------------------------------------------------------------

struct SweepCommand {
  ClusterFlags cluster;
  std::string ratios;
  std::string modes = "default,exclusive,coscheduled";
  std::string jobs_path;
  std::string out_dir;
  unsigned parallel = std::max(1u, std::thread::hardware_concurrency());

  void attach(CLI::App* app) {
    cluster.attach(app, false);
    add(app, "--ratios", ratios, "Comma list 1:2,1:4 or range 1:2..1:12:2")->required();
    add(app, "--modes", modes, "Comma list of default, exclusive, coscheduled")
        ->capture_default_str();
    add(app, "--jobs", jobs_path, "Job list JSON")->required();
    add(app, "--out-dir", out_dir, "Directory for per-run reports and plot.csv")->required();
    add(app, "--parallel", parallel, "Concurrent runs (default: available cores)")
        ->check(CLI::PositiveNumber);
  }

  int execute(std::ostream& out, std::ostream& err) const {
    const ClusterConfig base = cluster.resolve();
    const auto ratio_list = parse_ratio_list(ratios);
    std::vector<RunMode> mode_list;
    for (const auto& m : split(modes, ',')) mode_list.push_back(parse_run_mode(m));
    if (mode_list.empty()) throw ConfigError("--modes is empty");
    const auto jobs = read_jobs(jobs_path);

    if (std::find(mode_list.begin(), mode_list.end(), RunMode::Default) != mode_list.end()) {
      err << "warning: default mode ignores the little side of each ratio and runs on the big "
             "nodes only\n";
    }

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    const auto marker = (dir / "INCOMPLETE").string();
    write_file_atomic(marker,
                      "sweep in progress; outputs in this directory are partial until this file "
                      "is removed\n");
    fs::remove(dir / "plot.csv");

    std::mutex log_mutex;
    const auto entries =
        sweep(base, ratio_list, mode_list, jobs, parallel, [&](const SweepEntry& e) {
          emit_report(summarize(e.outcome, jobs), (dir / (file_stem(e) + ".json")).string());
          const std::scoped_lock lock(log_mutex);
          out << to_string(e.ratio) << ' ' << to_string(e.mode) << " makespan "
              << e.outcome.makespan << "\n";
        });
    emit_plot_csv(entries, (dir / "plot.csv").string());
    fs::remove(marker);
    out << entries.size() << " runs written to " << out_dir << "\n";
    return kOk;
  }
};

// --- estimate ---------------------------------------------------------------

struct EstimateCommand {
  std::string trace_path;
  std::string predicate = "band";
  std::size_t window = 5;
  std::size_t max_windows = 30;
  double band_epsilon = 0.05;
  double z = 1.96;
  std::optional<std::string> out_path;

  void attach(CLI::App* app) {
    add(app, "--trace", trace_path, "Usage trace CSV (time_s,cpu_cores,mem_mb)")->required();
    add(app, "--predicate", predicate, "paper (CI of the mean) | band (median +/- epsilon)")->capture_default_str();
    add(app, "--window", window, "Samples per window")->capture_default_str();
    add(app, "--max-windows", max_windows, "Windows before falling back")->capture_default_str();
    add(app, "--band-epsilon", band_epsilon, "Relative band half-width")->capture_default_str();
    add(app, "--z", z, "Confidence multiplier for the CI predicate")->capture_default_str();
    add(app, "--out", out_path, "Estimate JSON path (stdout if omitted)");
  }

  int execute(std::ostream& out, std::ostream& err) const {
    EstimatorOptions opts;
    opts.window_size = window;
    opts.max_windows = max_windows;
    opts.predicate.kind = parse_predicate_kind(predicate);
    opts.predicate.band_epsilon = band_epsilon;
    opts.predicate.z = z;
    validate(opts);

    const auto trace = load_trace(trace_path);
    const auto e = estimate_job(trace, opts);
    const json doc{{"cpu", estimate_json(e.cpu)},
                   {"mem", estimate_json(e.mem)},
                   {"profiling_ticks", e.profiling_ticks},
                   {"predicate", to_string(opts.predicate.kind)}};
    for (const auto& [name, est] : {std::pair{"cpu", e.cpu}, std::pair{"mem", e.mem}}) {
      if (!est.converged) {
        err << "warning: " << name << " did not converge; estimate uses all "
            << est.samples_used << " samples\n";
      }
    }
    const auto text = doc.dump(2) + "\n";
    if (out_path) {
      write_file_atomic(*out_path, text);
    } else {
      out << text;
    }
    return kOk;
  }
};

// --- gen-workload -----------------------------------------------------------

struct GenWorkloadCommand {
  WorkloadSpec spec;
  std::string preset = "parsec";
  std::string shape = "constant";
  bool synthetic = false;
  std::optional<std::string> out_path;

  void attach(CLI::App* app) {
    add(app, "--preset", preset, "parsec, or a comma list of preset names")->capture_default_str();
    add(app, "--count", spec.count, "Number of jobs")->capture_default_str();
    add(app, "--overestimate", spec.overestimate_factor, "request = peak * (1 + factor)")
        ->capture_default_str();
    add(app, "--seed", spec.seed, "Generator seed")->capture_default_str();
    add(app, "--shape", shape, "constant | ramp | noisy | spiky")->capture_default_str();
    add(app, "--duration-min", spec.duration_min_s, "Shortest job, seconds")->capture_default_str();
    add(app, "--duration-max", spec.duration_max_s, "Longest job, seconds")->capture_default_str();
    add(app, "--noise", spec.noise, "Relative noise for noisy traces")->capture_default_str();
    add(app, "--spike-probability", spec.spike_probability, "Per-sample spike chance")
        ->capture_default_str();
    add(app, "--spike-factor", spec.spike_factor, "Spike multiplier")->capture_default_str();
    add(app, "--ramp", spec.ramp_s, "Ramp length, seconds")->capture_default_str();
    add(app, "--sample-period", spec.sample_period_s, "Seconds per sample")->capture_default_str();
    app->add_flag("--synthetic", synthetic, "Random steady levels instead of presets")
        ->envname(env_name("--synthetic"));
    add(app, "--out", out_path, "Job list JSON path (stdout if omitted)");
  }

  int execute(std::ostream& out, std::ostream&) {
    spec.presets = resolve_preset_mix(preset);
    spec.shape = parse_trace_shape(shape);
    if (synthetic) spec.synthetic = SyntheticLevels{};
    const auto jobs = generate(spec);
    if (out_path) {
      save_jobs(*out_path, jobs);
      out << jobs.size() << " jobs written to " << *out_path << "\n";
    } else {
      out << jobs_to_json(jobs);
    }
    return kOk;
  }
};

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate profiling jobs on little nodes before placing them on big nodes."};
  app.footer(kFileFormats);
  app.require_subcommand(1);

  SimulateCommand simulate;
  SweepCommand sweep_cmd;
  EstimateCommand estimate;
  GenWorkloadCommand gen;
  auto* sim_app = app.add_subcommand("simulate", "Run one configuration and write a report");
  auto* sweep_app = app.add_subcommand("sweep", "Run every ratio x mode and write a plot CSV");
  auto* est_app = app.add_subcommand("estimate", "Estimate a job's resources from a usage trace");
  auto* gen_app = app.add_subcommand("gen-workload", "Write a deterministic job list");
  simulate.attach(sim_app);
  sweep_cmd.attach(sweep_app);
  estimate.attach(est_app);
  gen.attach(gen_app);
  for (auto* sub : {sim_app, sweep_app, est_app, gen_app}) sub->footer(kFileFormats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kConfigError;
  }

  try {
    if (*sim_app) return simulate.execute(out, err);
    if (*sweep_app) return sweep_cmd.execute(out, err);
    if (*est_app) return estimate.execute(out, err);
    return gen.execute(out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kInvariantViolation;
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInvariantViolation;
  }
}

}  // namespace littlebig::cli
