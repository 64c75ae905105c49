#include "oscsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "oscsim/csv.hpp"
#include "oscsim/errors.hpp"

namespace oscsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

TraceTimeline load_trace(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open trace file: " + path.string());

  std::map<long, std::vector<TraceEvent>> by_rank;
  std::string line;
  std::size_t line_no = 0;
  bool have_any = false;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (line_no == 1) {
      if (cells.size() != 3 || trim(cells[0]) != "rank" || trim(cells[1]) != "time" ||
          trim(cells[2]) != "iteration")
        throw TraceError(TraceError::Kind::parse,
                         "trace row 1: expected header 'rank,time,iteration'");
      continue;
    }
    if (cells.size() != 3)
      throw TraceError(TraceError::Kind::parse, "trace row " + std::to_string(line_no) +
                                                    ": expected 3 columns, got " +
                                                    std::to_string(cells.size()));
    long rank = 0;
    double t = 0.0, iter = 0.0;
    try {
      std::size_t used = 0;
      const std::string rc = trim(cells[0]);
      rank = std::stol(rc, &used);
      if (used != rc.size()) throw std::invalid_argument(rc);
      const std::string tc = trim(cells[1]);
      t = std::stod(tc, &used);
      if (used != tc.size()) throw std::invalid_argument(tc);
      const std::string ic = trim(cells[2]);
      iter = std::stod(ic, &used);
      if (used != ic.size()) throw std::invalid_argument(ic);
    } catch (const std::exception&) {
      throw TraceError(TraceError::Kind::parse,
                       "trace row " + std::to_string(line_no) + ": malformed value");
    }
    if (rank < 0)
      throw TraceError(TraceError::Kind::parse,
                       "trace row " + std::to_string(line_no) + ": negative rank");
    if (!std::isfinite(t) || !std::isfinite(iter) || iter < 0.0)
      throw TraceError(TraceError::Kind::parse,
                       "trace row " + std::to_string(line_no) + ": invalid time/iteration");
    by_rank[rank].push_back({t, iter});
    have_any = true;
  }
  if (!have_any) throw TraceError(TraceError::Kind::parse, "trace has no data rows");

  const long max_rank = by_rank.rbegin()->first;
  TraceTimeline tl;
  tl.rank_count = static_cast<std::size_t>(max_rank) + 1;
  tl.events.resize(tl.rank_count);
  tl.t_min = std::numeric_limits<double>::infinity();
  tl.t_max = -std::numeric_limits<double>::infinity();
  for (long r = 0; r <= max_rank; ++r) {
    auto it = by_rank.find(r);
    if (it == by_rank.end())
      throw TraceError(TraceError::Kind::missing_rank,
                       "trace is missing rank " + std::to_string(r) + " (ranks span 0.." +
                           std::to_string(max_rank) + ")");
    auto& ev = it->second;
    std::stable_sort(ev.begin(), ev.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.t < b.t; });
    for (std::size_t k = 1; k < ev.size(); ++k)
      if (ev[k].iteration < ev[k - 1].iteration)
        throw TraceError(TraceError::Kind::monotonicity,
                         "rank " + std::to_string(r) +
                             ": iteration count decreases at time " +
                             format_double(ev[k].t));
    tl.t_min = std::min(tl.t_min, ev.front().t);
    tl.t_max = std::max(tl.t_max, ev.back().t);
    tl.events[static_cast<std::size_t>(r)] = std::move(ev);
  }
  return tl;
}

namespace {

double iteration_at(const std::vector<TraceEvent>& ev, double t, TraceInterp mode) {
  // First event strictly after t.
  auto it = std::upper_bound(ev.begin(), ev.end(), t,
                             [](double v, const TraceEvent& e) { return v < e.t; });
  if (mode == TraceInterp::step) {
    if (it == ev.begin()) return 0.0;  // nothing completed yet
    return std::prev(it)->iteration;
  }
  if (it == ev.begin()) return ev.front().iteration;
  if (it == ev.end()) return ev.back().iteration;
  const TraceEvent& hi = *it;
  const TraceEvent& lo = *std::prev(it);
  if (hi.t <= lo.t) return hi.iteration;
  const double x = (t - lo.t) / (hi.t - lo.t);
  return lo.iteration + x * (hi.iteration - lo.iteration);
}

}  // namespace

std::vector<double> trace_phases(const TraceTimeline& tl, double t, TraceInterp mode) {
  const double eps = 1e-9 * std::max(1.0, std::abs(t));
  if (t < tl.t_min - eps || t > tl.t_max + eps)
    throw TraceError(TraceError::Kind::out_of_range,
                     "time " + format_double(t) + " outside trace span [" +
                         format_double(tl.t_min) + ", " + format_double(tl.t_max) + "]");
  std::vector<double> theta(tl.rank_count);
  for (std::size_t r = 0; r < tl.rank_count; ++r)
    theta[r] = kTwoPi * iteration_at(tl.events[r], t, mode);
  return theta;
}

SampledTrace sample_trace(const TraceTimeline& tl, std::size_t n_samples, TraceInterp mode) {
  SampledTrace out;
  if (n_samples == 0) return out;
  const std::size_t n = std::max<std::size_t>(n_samples, 2);
  const double span = tl.t_max - tl.t_min;
  out.times.reserve(n);
  out.states.reserve(n * tl.rank_count);
  for (std::size_t k = 0; k < n; ++k) {
    const double t =
        tl.t_min + span * static_cast<double>(k) / static_cast<double>(n - 1);
    const auto theta = trace_phases(tl, t, mode);
    out.times.push_back(t);
    out.states.insert(out.states.end(), theta.begin(), theta.end());
  }
  return out;
}

// ---------- comparison ----------

namespace {

double interp_series(const MetricSeries& s, double t) {
  const auto& ts = s.times;
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  if (it == ts.begin()) return s.values.front();
  if (it == ts.end()) return s.values.back();
  const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
  const std::size_t lo = hi - 1;
  if (ts[hi] <= ts[lo]) return s.values[hi];
  const double x = (t - ts[lo]) / (ts[hi] - ts[lo]);
  return s.values[lo] + x * (s.values[hi] - s.values[lo]);
}

double pearson(std::span<const double> a, std::span<const double> b, bool& defined) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double da = a[k] - ma, db = b[k] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) {
    defined = false;
    return 0.0;
  }
  defined = true;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

CompareReport compare_series(const MetricSeries& a, const MetricSeries& b,
                             const CompareOptions& opt) {
  if (a.kind != b.kind || a.kind != SeriesKind::scalar)
    throw TraceError(TraceError::Kind::incompatible,
                     "IncompatibleMetricKinds: can only compare scalar series");
  if (a.times.size() < 2 || b.times.size() < 2)
    throw TraceError(TraceError::Kind::incompatible,
                     "series need at least two samples to compare");

  const std::size_t n = std::max<std::size_t>(opt.grid, 8);
  CompareReport rep;
  rep.grid_times.resize(n);
  rep.a.resize(n);
  rep.b.resize(n);
  rep.delta.resize(n);

  double a0 = a.times.front(), a1 = a.times.back();
  double b0 = b.times.front(), b1 = b.times.back();
  if (!(a1 > a0) || !(b1 > b0))
    throw TraceError(TraceError::Kind::incompatible,
                     "series need a positive time span to compare");

  double lo = 0.0, hi = 1.0;
  if (opt.normalize_time) {
    rep.scale_a = a1 - a0;
    rep.scale_b = b1 - b0;
  } else {
    b0 *= opt.time_scale;
    b1 *= opt.time_scale;
    rep.scale_b = opt.time_scale;
    lo = std::max(a0, b0);
    hi = std::min(a1, b1);
    if (!(hi > lo))
      throw TraceError(TraceError::Kind::incompatible,
                       "series time ranges do not overlap");
  }

  double sum_abs = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    rep.grid_times[k] = u;
    const double ta = opt.normalize_time ? a0 + u * (a1 - a0) : u;
    const double tb = opt.normalize_time
                          ? b.times.front() + u * (b.times.back() - b.times.front())
                          : u / opt.time_scale;
    rep.a[k] = interp_series(a, ta);
    rep.b[k] = interp_series(b, tb);
    rep.delta[k] = rep.a[k] - rep.b[k];
    const double ad = std::abs(rep.delta[k]);
    sum_abs += ad;
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, ad);
  }
  rep.mean_abs_deviation = sum_abs / static_cast<double>(n);

  if (rep.max_abs_deviation <= 1e-15) {
    rep.correlation = 1.0;
    rep.correlation_defined = true;
  } else {
    rep.correlation = pearson(rep.a, rep.b, rep.correlation_defined);
  }

  // Lag scan: shift b by m grid cells; positive lag means b trails a.
  const double dt = (hi - lo) / static_cast<double>(n - 1);
  const std::size_t max_shift = n / 2;
  double best = -2.0;
  long best_m = 0;
  for (long m = -static_cast<long>(max_shift); m <= static_cast<long>(max_shift); ++m) {
    const std::size_t len = n - static_cast<std::size_t>(std::abs(m));
    if (len < std::max<std::size_t>(8, n / 4)) continue;
    const std::size_t ka = m >= 0 ? 0 : static_cast<std::size_t>(-m);
    const std::size_t kb = m >= 0 ? static_cast<std::size_t>(m) : 0;
    bool defined = false;
    const double c = pearson({rep.a.data() + ka, len}, {rep.b.data() + kb, len}, defined);
    if (defined && c > best) {
      best = c;
      best_m = m;
    }
  }
  rep.lag = static_cast<double>(best_m) * dt;
  return rep;
}

std::string CompareReport::summary_text() const {
  std::ostringstream ss;
  ss << "max_abs_deviation = " << format_double(max_abs_deviation) << "\n"
     << "mean_abs_deviation = " << format_double(mean_abs_deviation) << "\n"
     << "correlation = "
     << (correlation_defined ? format_double(correlation) : std::string("undefined"))
     << "\n"
     << "lag_at_max_xcorr = " << format_double(lag) << "\n"
     << "time_scale_a = " << format_double(scale_a) << "\n"
     << "time_scale_b = " << format_double(scale_b) << "\n"
     << "grid_points = " << grid_times.size() << "\n";
  return ss.str();
}

void write_compare_csv(const CompareReport& rep, const std::filesystem::path& file) {
  std::string text = "t,a,b,delta\n";
  for (std::size_t k = 0; k < rep.grid_times.size(); ++k) {
    append_double(text, rep.grid_times[k]);
    text.push_back(',');
    append_double(text, rep.a[k]);
    text.push_back(',');
    append_double(text, rep.b[k]);
    text.push_back(',');
    append_double(text, rep.delta[k]);
    text.push_back('\n');
  }
  write_text_file(file, text);
}

}  // namespace oscsim
