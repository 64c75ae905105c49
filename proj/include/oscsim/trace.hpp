#pragma once

#include <filesystem>
#include <vector>

#include "oscsim/metrics.hpp"

namespace oscsim {

struct TraceEvent {
  double t = 0.0;
  double iteration = 0.0;  // completed iterations at time t
};

// Per-rank iteration completion events on a shared time origin.
struct TraceTimeline {
  std::size_t rank_count = 0;
  std::vector<std::vector<TraceEvent>> events;  // per rank, time-ascending
  double t_min = 0.0;
  double t_max = 0.0;
};

// CSV with header rank,time,iteration.  Rows may be unordered; iteration
// counts must be non-decreasing in time within each rank, and ranks must
// cover 0..max_rank without gaps.
TraceTimeline load_trace(const std::filesystem::path& path);

enum class TraceInterp {
  step,    // phase jumps to 2*pi*iteration at each event (right-continuous)
  linear,  // iteration count interpolated linearly between events
};

// theta_r(t) = 2*pi * iteration_r(t).  t must lie within [t_min, t_max].
std::vector<double> trace_phases(const TraceTimeline& tl, double t, TraceInterp mode);

// Uniform n-sample grid over the trace span (row-major states, like a
// Trajectory).
struct SampledTrace {
  std::vector<double> times;
  std::vector<double> states;
};
SampledTrace sample_trace(const TraceTimeline& tl, std::size_t n_samples, TraceInterp mode);

// ---------- series comparison ----------

struct CompareOptions {
  std::size_t grid = 256;       // resampling points
  bool normalize_time = true;   // map both series onto [0, 1]
  double time_scale = 1.0;      // b's time axis is multiplied by this when
                                // normalize_time is false
};

struct CompareReport {
  double max_abs_deviation = 0.0;
  double mean_abs_deviation = 0.0;
  double correlation = 0.0;
  bool correlation_defined = true;
  double lag = 0.0;  // shift of b (in grid time units) maximizing correlation
  double scale_a = 1.0, scale_b = 1.0;  // applied time normalization factors
  std::vector<double> grid_times;
  std::vector<double> a, b, delta;

  std::string summary_text() const;
};

// Pointwise comparison of two scalar series after resampling onto a common
// grid.  Throws TraceError(incompatible) if the kinds differ.
CompareReport compare_series(const MetricSeries& a, const MetricSeries& b,
                             const CompareOptions& opt = {});

void write_compare_csv(const CompareReport& rep, const std::filesystem::path& file);

}  // namespace oscsim
