#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oscsim/csv.hpp"
#include "oscsim/errors.hpp"
#include "oscsim/runner.hpp"
#include "oscsim/version.hpp"

namespace {

using namespace oscsim;

KeyValueMap load_base(const std::string& config_file,
                      const std::vector<std::string>& overrides, long long seed) {
  KeyValueMap raw;
  if (!config_file.empty()) raw = load_config_file(config_file);
  for (const auto& o : overrides) apply_override(raw, o);
  if (seed >= 0) raw["seed"] = std::to_string(seed);
  return raw;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"coupled-oscillator model of parallel program phase dynamics"};
  app.set_version_flag("--version", OSCSIM_VERSION);
  app.require_subcommand(1);

  std::string config_file, out_dir, trace_file, compare_file;
  std::vector<std::string> overrides;
  long long seed = -1;
  std::size_t jobs = 1;

  auto add_common = [&](CLI::App* cmd, bool config) {
    if (config) {
      cmd->add_option("-c,--config", config_file, "configuration file");
      cmd->add_option("--set", overrides, "override KEY=VALUE (repeatable)");
      cmd->add_option("--seed", seed, "master seed override");
    }
    cmd->add_option("-o,--out", out_dir, "output directory")->required();
  };

  auto* sim = app.add_subcommand("simulate", "run one simulation");
  add_common(sim, true);

  auto* scen = app.add_subcommand("scenario", "run a named scenario");
  std::string scenario_name;
  bool list_scenarios = false;
  scen->add_option("name", scenario_name, "scenario name");
  scen->add_flag("--list", list_scenarios, "list scenario names and exit");
  scen->add_option("--set", overrides, "override KEY=VALUE (repeatable)");
  scen->add_option("-o,--out", out_dir, "output directory");
  scen->add_option("-j,--jobs", jobs, "worker threads for sweeps");

  auto* sweep = app.add_subcommand("sweep", "sweep one key across values and seeds");
  add_common(sweep, true);
  std::string sweep_key;
  std::vector<std::string> sweep_values;
  std::size_t sweep_seeds = 10;
  double threshold = 0.99, hold_fraction = 0.1;
  sweep->add_option("--key", sweep_key, "configuration key to sweep")->required();
  sweep->add_option("--values", sweep_values, "values to sweep")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_seeds, "seeds per value");
  sweep->add_option("--threshold", threshold, "R level defining resynchronization");
  sweep->add_option("--hold", hold_fraction, "hold window as a fraction of t_end");
  sweep->add_option("-j,--jobs", jobs, "worker threads");

  auto* trace = app.add_subcommand("trace", "metrics over an MPI iteration trace");
  trace->add_option("-i,--in", trace_file, "trace CSV (rank,time,iteration)")
      ->required();
  add_common(trace, false);
  std::string mode = "step";
  std::size_t samples = 512;
  std::size_t grid = 256;
  bool absolute_time = false;
  double time_scale = 1.0;
  trace->add_option("--mode", mode, "step or linear phase reconstruction")
      ->check(CLI::IsMember({"step", "linear"}));
  trace->add_option("--samples", samples, "samples across the trace span");
  trace->add_option("--compare", compare_file, "scalar series CSV to compare against");
  trace->add_option("--grid", grid, "comparison grid points");
  trace->add_flag("--absolute-time", absolute_time,
                  "compare on absolute time instead of normalized [0,1]");
  trace->add_option("--time-scale", time_scale,
                    "multiply the reference series' time axis (absolute mode)");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) {
    const LoadedConfig lc = build_config(load_base(config_file, overrides, seed));
    const RunOutput out = run_to_dir(lc, out_dir);
    std::printf("wrote %s: %zu samples, %llu accepted steps\n", out_dir.c_str(),
                out.trajectory.sample_count(),
                (unsigned long long)out.trajectory.stats.accepted);
    return 0;
  }

  if (scen->parsed()) {
    if (list_scenarios) {
      for (const auto& n : scenario_names())
        std::printf("%-14s %s\n", n.c_str(), scenario_by_name(n).summary.c_str());
      return 0;
    }
    if (scenario_name.empty() || out_dir.empty())
      throw ConfigError("scenario needs a name and --out (or --list)");
    run_scenario(scenario_by_name(scenario_name), out_dir, jobs, overrides);
    std::printf("wrote %s\n", out_dir.c_str());
    return 0;
  }

  if (sweep->parsed()) {
    SweepOptions opt;
    opt.key = sweep_key;
    opt.values = sweep_values;
    opt.seeds = sweep_seeds;
    opt.threshold = threshold;
    opt.hold_fraction = hold_fraction;
    opt.jobs = jobs;
    KeyValueMap base = load_base(config_file, overrides, seed);
    if (auto it = base.find("seed"); it != base.end())
      opt.seed_base = std::stoull(it->second);
    const SweepResult result = run_sweep(base, opt, out_dir);
    for (const auto& [value, median] : result.medians)
      std::printf("%s = %s: median resync %s\n", opt.key.c_str(), value.c_str(),
                  median ? format_double(*median).c_str() : "not reached");
    return 0;
  }

  TraceRunOptions opt;
  opt.mode = mode == "linear" ? TraceInterp::linear : TraceInterp::step;
  opt.samples = samples;
  if (!compare_file.empty()) opt.compare_with = compare_file;
  opt.compare.grid = grid;
  opt.compare.normalize_time = !absolute_time;
  opt.compare.time_scale = time_scale;
  const auto report = run_trace(trace_file, out_dir, opt);
  if (report) std::fputs(report->summary_text().c_str(), stdout);
  std::printf("wrote %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const oscsim::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const oscsim::TraceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const oscsim::IntegrationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
