#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oscsim/model.hpp"
#include "oscsim/potentials.hpp"

namespace oscsim {

// ---------- wrapping helpers ----------

double wrap_to_pi(double x);    // [-pi, pi)
double wrap_to_2pi(double x);   // [0, 2*pi)

// ---------- per-sample observables ----------

struct OrderParameter {
  double r = 0.0;
  double psi = 0.0;
  bool psi_defined = true;  // false when r is numerically zero
};

// R e^{i psi} = (1/P) sum_j e^{i theta_j}
OrderParameter order_parameter(std::span<const double> theta);

struct EntropyResult {
  double s = 0.0;
  std::size_t bins = 1;
};

// Shannon entropy of the wrapped phase distribution; Freedman-Diaconis bin
// count clamped to [1, P], equal-width bins over [0, 2*pi).
EntropyResult sync_entropy(std::span<const double> theta);

// g_i = sum_j T_ij |theta_j - theta_i| (raw differences; `wrapped` applies
// wrap_to_pi to each difference first).
std::vector<double> phase_gradient(std::span<const double> theta,
                                   const TopologyMatrix& topology, bool wrapped = false);

// Lower-triangular differences theta_j - theta_i for j < i, enumerated
// (1,0), (2,0), (2,1), (3,0), ...
std::vector<double> pairwise_differences(std::span<const double> theta);

// Full P x P matrix M_ij = theta_j - theta_i (row-major); optional wrap.
std::vector<double> difference_heatmap(std::span<const double> theta, bool wrap = false);

// V_total = sum_i sum_j T_ij V(theta_j - theta_i)^2
double potential_energy(std::span<const double> theta, const TopologyMatrix& topology,
                        const PotentialFn& v);

// Unit-circle positions; rotating_rate subtracts a reference rotation.
std::vector<std::array<double, 2>> phase_circle(std::span<const double> theta,
                                                double t = 0.0, double rotating_rate = 0.0);

// Earliest sample time t* with r >= threshold for every sample in
// [t*, t* + hold]; the window must fit inside the series.
std::optional<double> resync_time(std::span<const double> times,
                                  std::span<const double> r_series, double threshold,
                                  double hold);

// ---------- metric series over a trajectory ----------

enum class SeriesKind { scalar, vector, matrix };

struct MetricSeries {
  std::string name;
  SeriesKind kind = SeriesKind::scalar;
  std::size_t p = 0;      // oscillator count behind the series
  std::size_t width = 1;  // values per sample
  std::vector<std::string> labels;  // optional column labels (scalar/vector)
  std::vector<double> times;
  std::vector<double> values;  // times.size() x width, row-major

  std::span<const double> row(std::size_t k) const {
    return {values.data() + k * width, width};
  }
};

struct MetricSelection {
  bool order_parameter = true;
  bool entropy = true;
  bool gradient = true;
  bool pairwise = true;
  bool heatmap = true;
  bool potential = true;
  bool circle = false;
  bool wrapped_gradient = false;
  bool wrap_heatmap = false;
  // Model-time spacing between matrix snapshots; 0 picks ~10 snapshots.
  double heatmap_interval = 0.0;
};

// Computes the selected series over sampled phases (times.size() x p).
std::vector<MetricSeries> compute_metrics(std::span<const double> times,
                                          std::span<const double> states, std::size_t p,
                                          const TopologyMatrix& topology,
                                          const PotentialSpec& potential,
                                          const MetricSelection& sel);

// Scalar/vector series: <name>.csv with a t column.  Matrix series: one
// <name>_<k>.csv block per snapshot plus <name>_index.csv.
void write_series_csv(const MetricSeries& series, const std::filesystem::path& dir);

// Reads a scalar series back from a (t,value) CSV written by the above.
MetricSeries load_scalar_series_csv(const std::filesystem::path& file);

}  // namespace oscsim
