#include "oscsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "oscsim/csv.hpp"
#include "oscsim/errors.hpp"

namespace oscsim {

double wrap_to_pi(double x) {
  return x - kTwoPi * std::floor((x + std::numbers::pi) / kTwoPi);
}

double wrap_to_2pi(double x) {
  double w = x - kTwoPi * std::floor(x / kTwoPi);
  if (w >= kTwoPi) w = 0.0;  // guard against rounding at the seam
  return w;
}

OrderParameter order_parameter(std::span<const double> theta) {
  const double n = static_cast<double>(theta.size());
  double cs = 0.0, sn = 0.0;
  for (double th : theta) {
    cs += std::cos(th);
    sn += std::sin(th);
  }
  cs /= n;
  sn /= n;
  OrderParameter op;
  op.r = std::min(std::hypot(cs, sn), 1.0);
  if (op.r < 1e-12) {
    op.psi = 0.0;
    op.psi_defined = false;
  } else {
    op.psi = std::atan2(sn, cs);
  }
  return op;
}

namespace {

// Linear-interpolation quantile (R type 7) of a sorted sample.
double quantile_sorted(const std::vector<double>& x, double q) {
  const std::size_t n = x.size();
  if (n == 1) return x[0];
  const double pos = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= n) return x[n - 1];
  return x[lo] * (1.0 - frac) + x[lo + 1] * frac;
}

}  // namespace

EntropyResult sync_entropy(std::span<const double> theta) {
  const std::size_t n = theta.size();
  std::vector<double> wrapped(n);
  for (std::size_t i = 0; i < n; ++i) wrapped[i] = wrap_to_2pi(theta[i]);

  std::vector<double> sorted = wrapped;
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));

  std::size_t bins = 1;
  if (width > 0.0) {
    const double nb = std::ceil(kTwoPi / width);
    bins = nb >= static_cast<double>(n) ? n : static_cast<std::size_t>(nb);
    bins = std::clamp<std::size_t>(bins, 1, n);
  }

  EntropyResult res;
  res.bins = bins;
  if (bins == 1) return res;  // S = 0

  std::vector<std::size_t> counts(bins, 0);
  const double scale = static_cast<double>(bins) / kTwoPi;
  for (double w : wrapped) {
    auto k = static_cast<std::size_t>(w * scale);
    if (k >= bins) k = bins - 1;
    ++counts[k];
  }
  constexpr double eps = 1e-12;
  double s = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double pk = static_cast<double>(c) / static_cast<double>(n);
    s -= pk * std::log(pk + eps);
  }
  res.s = std::max(s, 0.0);
  return res;
}

std::vector<double> phase_gradient(std::span<const double> theta,
                                   const TopologyMatrix& topology, bool wrapped) {
  const std::size_t p = theta.size();
  std::vector<double> g(p, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (topology.influenced_by(i, j)) {
        const double d = theta[j] - theta[i];
        g[i] += std::abs(wrapped ? wrap_to_pi(d) : d);
      }
  return g;
}

std::vector<double> pairwise_differences(std::span<const double> theta) {
  const std::size_t p = theta.size();
  std::vector<double> out;
  out.reserve(p * (p - 1) / 2);
  for (std::size_t i = 1; i < p; ++i)
    for (std::size_t j = 0; j < i; ++j) out.push_back(theta[j] - theta[i]);
  return out;
}

std::vector<double> difference_heatmap(std::span<const double> theta, bool wrap) {
  const std::size_t p = theta.size();
  std::vector<double> m(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      const double d = theta[j] - theta[i];
      m[i * p + j] = wrap ? wrap_to_pi(d) : d;
    }
  return m;
}

double potential_energy(std::span<const double> theta, const TopologyMatrix& topology,
                        const PotentialFn& v) {
  const std::size_t p = theta.size();
  double total = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (topology.influenced_by(i, j)) {
        const double val = v(theta[j] - theta[i]);
        total += val * val;
      }
  return total;
}

std::vector<std::array<double, 2>> phase_circle(std::span<const double> theta, double t,
                                                double rotating_rate) {
  std::vector<std::array<double, 2>> pts(theta.size());
  const double shift = rotating_rate * t;
  for (std::size_t i = 0; i < theta.size(); ++i)
    pts[i] = {std::cos(theta[i] - shift), std::sin(theta[i] - shift)};
  return pts;
}

std::optional<double> resync_time(std::span<const double> times,
                                  std::span<const double> r_series, double threshold,
                                  double hold) {
  const std::size_t n = times.size();
  if (n == 0 || r_series.size() != n) return std::nullopt;
  const double dt_half = n > 1 ? 0.5 * (times[1] - times[0]) : 0.0;

  std::size_t bad = 0;  // next index with r below threshold
  auto advance_bad = [&](std::size_t from) {
    if (bad < from) bad = from;
    while (bad < n && r_series[bad] >= threshold) ++bad;
  };
  std::size_t a = 0;
  while (a < n) {
    if (r_series[a] < threshold) {
      ++a;
      continue;
    }
    advance_bad(a);
    const double window_end = times[a] + hold;
    const double eps = 1e-9 * std::max(1.0, std::abs(window_end));
    if (bad < n && times[bad] <= window_end + eps) {
      a = bad + 1;
      continue;
    }
    if (times[n - 1] + dt_half + eps >= window_end) return times[a];
    return std::nullopt;  // window cannot fit for any later start either
  }
  return std::nullopt;
}

// ---------- series over a trajectory ----------

std::vector<MetricSeries> compute_metrics(std::span<const double> times,
                                          std::span<const double> states, std::size_t p,
                                          const TopologyMatrix& topology,
                                          const PotentialSpec& potential,
                                          const MetricSelection& sel) {
  const std::size_t n = times.size();
  const PotentialFn v(potential);
  std::vector<MetricSeries> out;

  auto scalar_series = [&](const char* name) {
    MetricSeries s;
    s.name = name;
    s.kind = SeriesKind::scalar;
    s.p = p;
    s.width = 1;
    s.labels = {name};
    s.times.assign(times.begin(), times.end());
    s.values.reserve(n);
    return s;
  };

  MetricSeries r_series, psi_series, ent_series, grad_series, pair_series, pot_series,
      heat_series, circle_series;
  if (sel.order_parameter) {
    r_series = scalar_series("R");
    psi_series = scalar_series("psi");
  }
  if (sel.entropy) ent_series = scalar_series("entropy");
  if (sel.potential) pot_series = scalar_series("potential");
  if (sel.gradient) {
    grad_series.name = "gradient";
    grad_series.kind = SeriesKind::vector;
    grad_series.p = p;
    grad_series.width = p;
    grad_series.times.assign(times.begin(), times.end());
    for (std::size_t i = 0; i < p; ++i)
      grad_series.labels.push_back("g_" + std::to_string(i));
  }
  if (sel.pairwise) {
    pair_series.name = "pairwise";
    pair_series.kind = SeriesKind::vector;
    pair_series.p = p;
    pair_series.width = p * (p - 1) / 2;
    pair_series.times.assign(times.begin(), times.end());
    for (std::size_t i = 1; i < p; ++i)
      for (std::size_t j = 0; j < i; ++j)
        pair_series.labels.push_back("d_" + std::to_string(i) + "_" + std::to_string(j));
  }
  if (sel.circle) {
    circle_series.name = "circle";
    circle_series.kind = SeriesKind::vector;
    circle_series.p = p;
    circle_series.width = 2 * p;
    circle_series.times.assign(times.begin(), times.end());
    for (std::size_t i = 0; i < p; ++i) {
      circle_series.labels.push_back("x_" + std::to_string(i));
      circle_series.labels.push_back("y_" + std::to_string(i));
    }
  }
  if (sel.heatmap) {
    heat_series.name = "heatmap";
    heat_series.kind = SeriesKind::matrix;
    heat_series.p = p;
    heat_series.width = p * p;
  }
  const double t_last = n ? times[n - 1] : 0.0;
  const double heat_stride =
      sel.heatmap_interval > 0.0 ? sel.heatmap_interval : std::max(t_last / 10.0, 0.0);
  double next_heat = times.empty() ? 0.0 : times[0];

  for (std::size_t k = 0; k < n; ++k) {
    std::span<const double> theta{states.data() + k * p, p};
    if (sel.order_parameter) {
      const OrderParameter op = order_parameter(theta);
      r_series.values.push_back(op.r);
      psi_series.values.push_back(op.psi);
    }
    if (sel.entropy) ent_series.values.push_back(sync_entropy(theta).s);
    if (sel.potential) pot_series.values.push_back(potential_energy(theta, topology, v));
    if (sel.gradient) {
      const auto g = phase_gradient(theta, topology, sel.wrapped_gradient);
      grad_series.values.insert(grad_series.values.end(), g.begin(), g.end());
    }
    if (sel.pairwise) {
      const auto d = pairwise_differences(theta);
      pair_series.values.insert(pair_series.values.end(), d.begin(), d.end());
    }
    if (sel.circle) {
      const auto pts = phase_circle(theta, times[k]);
      for (const auto& pt : pts) {
        circle_series.values.push_back(pt[0]);
        circle_series.values.push_back(pt[1]);
      }
    }
    if (sel.heatmap) {
      const double eps = 1e-9 * std::max(1.0, std::abs(times[k]));
      const bool is_last = k + 1 == n;
      if (times[k] + eps >= next_heat || is_last) {
        const auto m = difference_heatmap(theta, sel.wrap_heatmap);
        heat_series.times.push_back(times[k]);
        heat_series.values.insert(heat_series.values.end(), m.begin(), m.end());
        if (heat_stride > 0.0)
          while (next_heat <= times[k] + eps) next_heat += heat_stride;
        else
          next_heat = std::numeric_limits<double>::infinity();
      }
    }
  }

  if (sel.order_parameter) {
    out.push_back(std::move(r_series));
    out.push_back(std::move(psi_series));
  }
  if (sel.entropy) out.push_back(std::move(ent_series));
  if (sel.gradient) out.push_back(std::move(grad_series));
  if (sel.pairwise) out.push_back(std::move(pair_series));
  if (sel.heatmap) out.push_back(std::move(heat_series));
  if (sel.potential) out.push_back(std::move(pot_series));
  if (sel.circle) out.push_back(std::move(circle_series));
  return out;
}

void write_series_csv(const MetricSeries& series, const std::filesystem::path& dir) {
  if (series.kind == SeriesKind::matrix) {
    std::string index = "k,t,file\n";
    for (std::size_t k = 0; k < series.times.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%04zu.csv", series.name.c_str(), k);
      std::string block;
      const std::size_t p = series.p;
      for (std::size_t i = 0; i < p; ++i)
        append_csv_row(block, std::span<const double>{
                                  series.values.data() + k * series.width + i * p, p});
      write_text_file(dir / name, block);
      index += std::to_string(k);
      index.push_back(',');
      append_double(index, series.times[k]);
      index.push_back(',');
      index += name;
      index.push_back('\n');
    }
    write_text_file(dir / (series.name + "_index.csv"), index);
    return;
  }

  std::string text = "t";
  for (std::size_t c = 0; c < series.width; ++c) {
    text.push_back(',');
    text += c < series.labels.size() ? series.labels[c]
                                     : series.name + "_" + std::to_string(c);
  }
  text.push_back('\n');
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    append_double(text, series.times[k]);
    for (double v : series.row(k)) {
      text.push_back(',');
      append_double(text, v);
    }
    text.push_back('\n');
  }
  write_text_file(dir / (series.name + ".csv"), text);
}

MetricSeries load_scalar_series_csv(const std::filesystem::path& file) {
  const std::string text = read_text_file(file);
  MetricSeries s;
  s.kind = SeriesKind::scalar;
  s.width = 1;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (line_no == 1) {
      if (cells.size() < 2)
        throw TraceError(TraceError::Kind::parse,
                         file.string() + ": expected a header with at least 2 columns");
      s.name = cells[1];
      s.labels = {cells[1]};
      continue;
    }
    if (cells.size() < 2)
      throw TraceError(TraceError::Kind::parse, file.string() + " line " +
                                                    std::to_string(line_no) +
                                                    ": expected t,value");
    try {
      std::size_t used = 0;
      const double t = std::stod(cells[0], &used);
      const double v = std::stod(cells[1], &used);
      s.times.push_back(t);
      s.values.push_back(v);
    } catch (const std::exception&) {
      throw TraceError(TraceError::Kind::parse, file.string() + " line " +
                                                    std::to_string(line_no) +
                                                    ": malformed number");
    }
  }
  return s;
}

}  // namespace oscsim
