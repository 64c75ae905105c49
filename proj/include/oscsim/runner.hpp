#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oscsim/config_io.hpp"
#include "oscsim/integrator.hpp"
#include "oscsim/metrics.hpp"
#include "oscsim/scenarios.hpp"
#include "oscsim/trace.hpp"

namespace oscsim {

struct RunOutput {
  Trajectory trajectory;
  std::vector<MetricSeries> metrics;
};

const MetricSeries* find_series(const std::vector<MetricSeries>& metrics,
                                const std::string& name);

RunOutput run_simulation(const LoadedConfig& lc);

// manifest.txt + trajectory.csv + one CSV per metric series.
void write_run_dir(const LoadedConfig& lc, const RunOutput& out,
                   const std::filesystem::path& dir);

RunOutput run_to_dir(const LoadedConfig& lc, const std::filesystem::path& dir);

// ---------- sweeps ----------

struct SweepOptions {
  std::string key;
  std::vector<std::string> values;
  std::size_t seeds = 10;
  std::uint64_t seed_base = 1;  // run k uses master seed seed_base + k
  double threshold = 0.99;      // R level defining resynchronization
  double hold_fraction = 0.1;   // of t_end
  std::size_t jobs = 1;
  bool write_runs = true;
};

struct SweepRunResult {
  std::string value;
  std::uint64_t seed = 0;
  std::optional<double> resync;
};

struct SweepResult {
  std::vector<SweepRunResult> runs;
  // per sweep value, in input order; median over runs that resynchronized
  std::vector<std::pair<std::string, std::optional<double>>> medians;
};

// out_dir may be empty to keep everything in memory.
SweepResult run_sweep(const KeyValueMap& base, const SweepOptions& opt,
                      const std::filesystem::path& out_dir);

// ---------- drivers ----------

void run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir,
                  std::size_t jobs, const std::vector<std::string>& overrides);

struct TraceRunOptions {
  TraceInterp mode = TraceInterp::step;
  std::size_t samples = 512;
  std::optional<std::filesystem::path> compare_with;  // scalar series CSV
  CompareOptions compare;
};

// Metrics over trace-derived phases; optionally compares the trace's R
// series against a reference scalar series. Returns the comparison report
// when one was requested.
std::optional<CompareReport> run_trace(const std::filesystem::path& trace_file,
                                       const std::filesystem::path& out_dir,
                                       const TraceRunOptions& opt);

}  // namespace oscsim
