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
#include "littlebig/workload.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "littlebig/error.hpp"
#include "littlebig/random.hpp"

namespace littlebig {

namespace {

// Steady-state memory (MB) and cpu (cores) of each preset.
const std::array<PresetProfile, 9> kPresets{{
    {"Blackscholes", 1234.31, 2.0},
    {"Bodytrack", 970.14, 3.0},
    {"Canneal", 966.60, 1.0},
    {"Ferret", 212.03, 2.0},
    {"Fluidanimate", 541.2, 2.0},
    {"Freqmine", 825.01, 1.0},
    {"Streamcluster", 106.96, 3.0},
    {"Swaptions", 4.56, 3.0},
    {"DGEMM", 28.4, 5.0},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::span<const PresetProfile> builtin_presets() { return kPresets; }

const PresetProfile& find_preset(std::string_view name) {
  const std::string key = lower(trim(name));
  for (const auto& p : kPresets) {
    if (lower(p.name) == key) return p;
  }
  std::string valid = "parsec";
  for (const auto& p : kPresets) valid += ", " + lower(p.name);
  throw ConfigError("unknown preset '" + std::string(name) + "'; valid presets: " + valid);
}

std::vector<std::string> resolve_preset_mix(std::string_view mix) {
  std::vector<std::string> out;
  std::string_view rest = mix;
  while (true) {
    const auto comma = rest.find(',');
    const std::string item = trim(rest.substr(0, comma));
    if (lower(item) == "parsec") {
      for (const auto& p : kPresets) out.push_back(p.name);
    } else if (!item.empty()) {
      out.push_back(find_preset(item).name);
    }
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError("empty preset mix");
  return out;
}

std::string to_string(TraceShape shape) {
  switch (shape) {
    case TraceShape::Constant: return "constant";
    case TraceShape::RampThenSteady: return "ramp";
    case TraceShape::NoisySteady: return "noisy";
    case TraceShape::Spiky: return "spiky";
  }
  return "unknown";
}

TraceShape parse_trace_shape(const std::string& name) {
  const auto key = lower(name);
  if (key == "constant") return TraceShape::Constant;
  if (key == "ramp" || key == "ramp-then-steady") return TraceShape::RampThenSteady;
  if (key == "noisy" || key == "noisy-steady") return TraceShape::NoisySteady;
  if (key == "spiky") return TraceShape::Spiky;
  throw ConfigError("unknown trace shape '" + name + "' (expected constant|ramp|noisy|spiky)");
}

void validate(const WorkloadSpec& spec) {
  if (!(spec.overestimate_factor >= 0.0)) throw ConfigError("overestimate_factor must be >= 0");
  if (spec.duration_min_s < 1 || spec.duration_max_s < spec.duration_min_s) {
    throw ConfigError("duration range must satisfy 1 <= min <= max");
  }
  if (!(spec.sample_period_s > 0.0)) throw ConfigError("sample_period_s must be positive");
  if (!spec.synthetic && spec.presets.empty() && spec.count > 0) {
    throw ConfigError("workload needs presets or synthetic levels");
  }
  if (!(spec.noise >= 0.0) || !(spec.spike_factor >= 1.0) || spec.spike_probability < 0.0 ||
      spec.spike_probability > 1.0 || spec.ramp_s < 0) {
    throw ConfigError("invalid trace shape parameters");
  }
  if (spec.synthetic) {
    const auto& s = *spec.synthetic;
    if (!s.min_steady.valid() || !fits_within(s.min_steady, s.max_steady) ||
        s.min_steady.cpu <= 0.0 || s.min_steady.mem <= 0.0) {
      throw ConfigError("synthetic levels must satisfy 0 < min <= max");
    }
  }
  for (const auto& p : spec.presets) find_preset(p);
}

namespace {

UsageTrace make_trace(const WorkloadSpec& spec, const ResourceVector& steady, std::size_t samples,
                      Rng& rng) {
  UsageTrace trace;
  trace.samples.reserve(samples);
  const auto ramp = static_cast<std::size_t>(
      std::min<std::int64_t>(spec.ramp_s, static_cast<std::int64_t>(samples / 4)));
  for (std::size_t t = 0; t < samples; ++t) {
    ResourceVector s = steady;
    switch (spec.shape) {
      case TraceShape::Constant:
        break;
      case TraceShape::RampThenSteady:
        if (t < ramp) {
          const double f = 0.25 + 0.75 * static_cast<double>(t) / static_cast<double>(ramp);
          s = steady * f;
        }
        break;
      case TraceShape::NoisySteady:
        s.cpu = std::max(0.0, steady.cpu * (1.0 + spec.noise * rng.normal()));
        s.mem = std::max(0.0, steady.mem * (1.0 + spec.noise * rng.normal()));
        break;
      case TraceShape::Spiky:
        if (rng.bernoulli(spec.spike_probability)) s = steady * spec.spike_factor;
        break;
    }
    trace.samples.push_back(s);
  }
  return trace;
}

}  // namespace

std::vector<JobSpec> generate(const WorkloadSpec& spec) {
  validate(spec);
  std::vector<JobSpec> jobs;
  jobs.reserve(spec.count);
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < spec.count; ++i) {
    std::string name;
    ResourceVector steady;
    if (spec.synthetic) {
      name = "synthetic";
      steady = {rng.uniform(spec.synthetic->min_steady.cpu, spec.synthetic->max_steady.cpu),
                rng.uniform(spec.synthetic->min_steady.mem, spec.synthetic->max_steady.mem)};
    } else {
      const auto& preset = find_preset(spec.presets[i % spec.presets.size()]);
      name = lower(preset.name);
      steady = preset.steady();
    }

    // Whole sample periods only, so trace length == duration / period.
    const auto periods = rng.uniform_int(
        static_cast<std::int64_t>(std::ceil(static_cast<double>(spec.duration_min_s) / spec.sample_period_s)),
        static_cast<std::int64_t>(std::floor(static_cast<double>(spec.duration_max_s) / spec.sample_period_s)));
    JobSpec job;
    std::ostringstream id;
    id << name << '-' << std::setw(3) << std::setfill('0') << i;
    job.id = id.str();
    job.trace = make_trace(spec, steady, static_cast<std::size_t>(std::max<std::int64_t>(1, periods)), rng);
    job.duration_s = static_cast<std::int64_t>(std::llround(static_cast<double>(job.trace.size()) * spec.sample_period_s));
    job.requested = job.trace.peak() * (1.0 + spec.overestimate_factor);
    jobs.push_back(std::move(job));
  }
  return jobs;
}

UsageTrace parse_trace_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  UsageTrace trace;
  double prev_time = 0.0;
  double spacing = 0.0;

  auto parse_field = [&](const std::string& field, const char* what) {
    const std::string f = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(value)) {
      throw ParseError(lineno, std::string("malformed ") + what + " '" + f + "'");
    }
    if (value < 0.0) throw ParseError(lineno, std::string("negative ") + what + " '" + f + "'");
    return value;
  };

  while (std::getline(in, line)) {
    ++lineno;
    const std::string row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      std::string compact;
      for (char c : row) {
        if (c != ' ' && c != '\t') compact += c;
      }
      if (compact != "time_s,cpu_cores,mem_mb") {
        throw ParseError(lineno, "expected header 'time_s,cpu_cores,mem_mb'");
      }
      header_seen = true;
      continue;
    }

    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const auto comma = row.find(',', pos);
      fields.push_back(row.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != 3) {
      throw ParseError(lineno, "expected 3 fields, found " + std::to_string(fields.size()));
    }
    const double time = parse_field(fields[0], "time_s");
    const double cpu = parse_field(fields[1], "cpu_cores");
    const double mem = parse_field(fields[2], "mem_mb");

    if (!trace.empty()) {
      const double step = time - prev_time;
      if (step <= 0.0) throw ParseError(lineno, "time is not strictly increasing");
      if (trace.size() == 1) {
        spacing = step;
      } else if (std::abs(step - spacing) > 1e-9 * std::max(1.0, spacing)) {
        throw ParseError(lineno, "non-uniform time spacing");
      }
    }
    prev_time = time;
    trace.samples.push_back({cpu, mem});
  }
  if (!header_seen) throw ParseError(0, "empty trace file");
  if (trace.empty()) throw ParseError(lineno, "trace has no samples");
  return trace;
}

UsageTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path + "'");
  return parse_trace_csv(in);
}

void save_trace(const std::string& path, const UsageTrace& trace, double sample_period_s) {
  std::ostringstream os;
  os << std::setprecision(17) << "time_s,cpu_cores,mem_mb\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << static_cast<double>(i) * sample_period_s << ',' << trace[i].cpu << ',' << trace[i].mem
       << '\n';
  }
  write_file_atomic(path, os.str());
}

std::string jobs_to_json(std::span<const JobSpec> jobs) {
  nlohmann::json doc;
  doc["format_version"] = kJobsFormatVersion;
  doc["jobs"] = nlohmann::json::array();
  for (const auto& j : jobs) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& s : j.trace.samples) trace.push_back({s.cpu, s.mem});
    doc["jobs"].push_back({{"id", j.id},
                           {"requested", {{"cpu", j.requested.cpu}, {"mem", j.requested.mem}}},
                           {"duration_s", j.duration_s},
                           {"trace", std::move(trace)}});
  }
  return doc.dump(1) + "\n";
}

std::vector<JobSpec> jobs_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("jobs file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format_version")) {
    throw ParseError(0, "jobs file lacks format_version");
  }
  if (!doc["format_version"].is_number_integer() ||
      doc["format_version"].get<int>() != kJobsFormatVersion) {
    throw UnsupportedVersion("unsupported jobs format_version " + doc["format_version"].dump() +
                             " (this build reads version " + std::to_string(kJobsFormatVersion) +
                             ")");
  }
  std::vector<JobSpec> jobs;
  try {
    for (const auto& j : doc.at("jobs")) {
      JobSpec job;
      job.id = j.at("id").get<std::string>();
      job.requested = {j.at("requested").at("cpu").get<double>(),
                       j.at("requested").at("mem").get<double>()};
      job.duration_s = j.at("duration_s").get<std::int64_t>();
      for (const auto& s : j.at("trace")) {
        if (!s.is_array() || s.size() != 2) throw ParseError(0, "trace samples must be [cpu, mem]");
        job.trace.samples.push_back({s[0].get<double>(), s[1].get<double>()});
      }
      jobs.push_back(std::move(job));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed jobs file: ") + e.what());
  }
  return jobs;
}

void save_jobs(const std::string& path, std::span<const JobSpec> jobs) {
  write_file_atomic(path, jobs_to_json(jobs));
}

std::vector<JobSpec> load_jobs(const std::string& path) {
  return jobs_from_json(read_file(path));
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace littlebig
