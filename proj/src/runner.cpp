#include "oscsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "oscsim/csv.hpp"
#include "oscsim/errors.hpp"
#include "oscsim/topology.hpp"
#include "oscsim/version.hpp"

namespace oscsim {

namespace fs = std::filesystem;

const MetricSeries* find_series(const std::vector<MetricSeries>& metrics,
                                const std::string& name) {
  for (const auto& s : metrics)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

MetricSelection selection_from(const OutputOptions& out) {
  MetricSelection sel;
  sel.circle = out.circle;
  sel.wrapped_gradient = out.wrapped_gradient;
  sel.wrap_heatmap = out.wrap_heatmap;
  sel.heatmap_interval = out.heatmap_interval;
  return sel;
}

void write_trajectory_csv(const Trajectory& traj, const fs::path& file) {
  std::string text = "t";
  for (std::size_t i = 0; i < traj.p; ++i) text += ",theta_" + std::to_string(i);
  text += '\n';
  for (std::size_t k = 0; k < traj.sample_count(); ++k) {
    append_double(text, traj.times[k]);
    for (double v : traj.state(k)) {
      text.push_back(',');
      append_double(text, v);
    }
    text.push_back('\n');
  }
  write_text_file(file, text);
}

}  // namespace

RunOutput run_simulation(const LoadedConfig& lc) {
  RunOutput out;
  out.trajectory = integrate(lc.sim);
  out.metrics = compute_metrics(out.trajectory.times, out.trajectory.states,
                                out.trajectory.p, lc.sim.topology, lc.sim.potential,
                                selection_from(lc.output));
  return out;
}

void write_run_dir(const LoadedConfig& lc, const RunOutput& out, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  KeyValueMap manifest = lc.resolved;
  manifest.emplace("meta.version", OSCSIM_VERSION);
  write_text_file(dir / "manifest.txt", serialize_config(manifest));
  write_trajectory_csv(out.trajectory, dir / "trajectory.csv");
  for (const auto& series : out.metrics) write_series_csv(series, dir);
}

RunOutput run_to_dir(const LoadedConfig& lc, const fs::path& dir) {
  RunOutput out = run_simulation(lc);
  write_run_dir(lc, out, dir);
  return out;
}

// ---------- sweeps ----------

namespace {

std::optional<double> median_of(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SweepResult run_sweep(const KeyValueMap& base, const SweepOptions& opt,
                      const fs::path& out_dir) {
  if (opt.key.empty() || opt.values.empty())
    throw ConfigError("sweep needs a key and at least one value");
  if (opt.seeds == 0) throw ConfigError("sweep needs at least one seed");

  struct Task {
    std::string value;
    std::uint64_t seed = 0;
    fs::path dir;
    std::optional<double> resync;
  };
  std::vector<Task> tasks;
  for (const auto& value : opt.values)
    for (std::size_t k = 0; k < opt.seeds; ++k) {
      Task t;
      t.value = value;
      t.seed = opt.seed_base + k;
      if (!out_dir.empty() && opt.write_runs)
        t.dir = out_dir / value / ("seed-" + std::to_string(t.seed));
      tasks.push_back(std::move(t));
    }

  std::atomic<std::size_t> cursor{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= tasks.size()) return;
      {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error) return;
      }
      try {
        Task& task = tasks[k];
        KeyValueMap raw = base;
        raw[opt.key] = task.value;
        raw["seed"] = std::to_string(task.seed);
        raw.erase("topology.seed");
        raw.erase("noise.seed");
        raw.erase("delay.seed");
        raw.erase("initial.seed");
        const LoadedConfig lc = build_config(raw);
        RunOutput out = run_simulation(lc);
        if (!task.dir.empty()) write_run_dir(lc, out, task.dir);
        const MetricSeries* r = find_series(out.metrics, "R");
        if (r)
          task.resync = resync_time(r->times, r->values, opt.threshold,
                                    opt.hold_fraction * lc.sim.t_end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, opt.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  SweepResult result;
  for (const auto& t : tasks) result.runs.push_back({t.value, t.seed, t.resync});
  for (const auto& value : opt.values) {
    std::vector<double> reached;
    for (const auto& run : result.runs)
      if (run.value == value && run.resync) reached.push_back(*run.resync);
    result.medians.emplace_back(value, median_of(std::move(reached)));
  }

  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    std::string runs_csv = opt.key + ",seed,resync_time\n";
    for (const auto& run : result.runs) {
      runs_csv += run.value;
      runs_csv.push_back(',');
      runs_csv += std::to_string(run.seed);
      runs_csv.push_back(',');
      if (run.resync) append_double(runs_csv, *run.resync);
      runs_csv.push_back('\n');
    }
    write_text_file(out_dir / "runs.csv", runs_csv);

    std::string summary = opt.key + ",median_resync_time,reached,runs\n";
    for (const auto& [value, median] : result.medians) {
      std::size_t reached = 0, total = 0;
      for (const auto& run : result.runs)
        if (run.value == value) {
          ++total;
          if (run.resync) ++reached;
        }
      summary += value;
      summary.push_back(',');
      if (median) append_double(summary, *median);
      summary.push_back(',');
      summary += std::to_string(reached);
      summary.push_back(',');
      summary += std::to_string(total);
      summary.push_back('\n');
    }
    write_text_file(out_dir / "summary.csv", summary);
  }
  return result;
}

// ---------- drivers ----------

void run_scenario(const Scenario& scenario, const fs::path& out_dir, std::size_t jobs,
                  const std::vector<std::string>& overrides) {
  KeyValueMap raw = scenario.config;
  raw["meta.scenario"] = scenario.name;
  for (const auto& o : overrides) apply_override(raw, o);

  if (scenario.sweep) {
    SweepOptions opt;
    opt.key = scenario.sweep->key;
    opt.values = scenario.sweep->values;
    opt.seeds = scenario.sweep->seeds;
    auto it = raw.find("seed");
    opt.seed_base = it != raw.end() ? std::stoull(it->second) : 1;
    opt.jobs = jobs;
    run_sweep(raw, opt, out_dir);
    return;
  }
  run_to_dir(build_config(raw), out_dir);
}

std::optional<CompareReport> run_trace(const fs::path& trace_file, const fs::path& out_dir,
                                       const TraceRunOptions& opt) {
  const TraceTimeline tl = load_trace(trace_file);
  const SampledTrace sampled = sample_trace(tl, opt.samples, opt.mode);

  MetricSelection sel;
  sel.potential = false;  // traces carry no interaction model
  const TopologyMatrix topo =
      tl.rank_count > 1 ? chain_topology(tl.rank_count, ChainDirection::bidirectional)
                        : TopologyMatrix(tl.rank_count);
  const auto metrics = compute_metrics(sampled.times, sampled.states, tl.rank_count,
                                       topo, PotentialSpec{SinPotential{}}, sel);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  for (const auto& series : metrics) write_series_csv(series, out_dir);

  if (!opt.compare_with) return std::nullopt;
  const MetricSeries* r = find_series(metrics, "R");
  if (!r) throw TraceError(TraceError::Kind::incompatible, "trace produced no R series");
  const MetricSeries other = load_scalar_series_csv(*opt.compare_with);
  CompareReport rep = compare_series(*r, other, opt.compare);
  write_compare_csv(rep, out_dir / "compare.csv");
  write_text_file(out_dir / "compare_summary.txt", rep.summary_text());
  return rep;
}

}  // namespace oscsim
