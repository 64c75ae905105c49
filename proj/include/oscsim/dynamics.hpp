#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "oscsim/model.hpp"
#include "oscsim/potentials.hpp"

namespace oscsim {

// ---------- dense solution history ----------

// Piecewise-polynomial record of the accepted steps, used for delayed state
// lookups and for sampling between steps.  Each record holds the integrator's
// continuous-extension coefficients over [t0, t0+h]; queries before the
// start of integration return the constant prehistory vector.
class HistoryBuffer {
 public:
  HistoryBuffer(std::size_t p, std::vector<double> prehistory, double t_begin = 0.0);

  // Oldest time that must stay resolvable; older records are discarded.
  void set_retention(double max_delay) { retention_ = max_delay; }

  // coeffs: 5 coefficient vectors of length p, concatenated (c0..c4).
  // u(t0 + x*h) = c0 + x*(c1 + (1-x)*(c2 + x*(c3 + (1-x)*c4)))
  void push_step(double t0, double h, std::vector<double> coeffs);

  double component(double t, std::size_t j) const;
  void state(double t, std::span<double> out) const;

  std::size_t oscillator_count() const { return p_; }
  double begin_time() const { return t_begin_; }
  double newest_time() const;
  std::size_t record_count() const { return records_.size(); }

 private:
  struct Record {
    double t0, h;
    std::vector<double> coeffs;  // 5*p
  };
  const Record* find(double t) const;

  std::size_t p_;
  double t_begin_;
  double retention_ = 0.0;
  std::vector<double> prehistory_;
  std::deque<Record> records_;
};

// ---------- noise stream ----------

// Multiplicative velocity noise zeta_i(t) = c * base_i * r_i(t).  The random
// vector r (uniform on [0,1) per oscillator) is piecewise-constant on
// intervals [k*refresh, (k+1)*refresh) and is a pure function of (seed, k, i),
// so repeated evaluation at the same time is identical.
class NoiseStream {
 public:
  NoiseStream(const NoiseSpec& spec, std::size_t p);

  bool active() const { return spec_.coefficient > 0.0; }
  double refresh_interval() const { return spec_.refresh_interval; }
  double coefficient() const { return spec_.coefficient; }
  NoiseBase base() const { return spec_.base; }

  std::uint64_t interval_at(double t) const;
  void values(std::uint64_t interval, std::span<double> r_out) const;

 private:
  NoiseSpec spec_;
  std::size_t p_;
  std::uint64_t stream_seed_;
};

// zeta_i = c * base_velocity_i * r_i(t)
std::vector<double> noise_sample(const NoiseStream& stream, double t,
                                 std::span<const double> base_velocity);

// ---------- delay stream ----------

class DelayStream {
 public:
  DelayStream(const DelaySpec& spec, const TopologyMatrix& topology);

  bool stochastic() const;
  double refresh_interval() const;  // 0 when not stochastic
  // Largest tau the realization can produce (upper bound for retention).
  double max_delay() const { return max_delay_; }

  std::uint64_t interval_at(double t) const;
  // Fills the realized P*P delay matrix for the interval and returns the
  // smallest strictly positive delay on an enabled edge (0 if none).
  double realize(std::uint64_t interval, std::vector<double>& tau_out) const;

 private:
  const DelaySpec* spec_;
  const TopologyMatrix* topology_;
  std::size_t p_;
  double max_delay_ = 0.0;
  std::uint64_t stream_seed_ = 0;
};

// Realized delay for edge (i <- j) at time t.
double resolve_delay(const DelaySpec& spec, const TopologyMatrix& topology,
                     std::size_t i, std::size_t j, double t);

// ---------- right-hand side ----------

// dtheta_i/dt = omega + zeta_i + (v_p/P) * sum_j T_ij V(theta_j(t - tau_ij) - theta_i)
class RhsEvaluator {
 public:
  explicit RhsEvaluator(const SimulationConfig& cfg);

  // r_noise: current per-oscillator noise values (null = no noise).
  // tau: realized P*P delay matrix (null = no delays).  Entries equal to 0
  // read the current stage vector directly, so a zero delay matrix is
  // exactly the undelayed path.
  void eval(double t, std::span<const double> theta, const HistoryBuffer* history,
            const double* r_noise, const std::vector<double>* tau,
            std::span<double> dtheta) const;

  double omega() const { return omega_; }
  double coupling_gain() const { return gain_; }  // v_p / P
  std::span<const std::uint32_t> neighbors(std::size_t i) const;

 private:
  std::size_t p_;
  double omega_, gain_;
  double noise_coefficient_;
  NoiseBase noise_base_;
  PotentialFn potential_;
  std::vector<std::uint32_t> nbr_flat_;   // in-neighbors, grouped by oscillator
  std::vector<std::uint32_t> nbr_start_;  // p_+1 offsets into nbr_flat_
};

// Convenience form resolving noise and delays from the state time itself.
std::vector<double> rhs(const PhaseState& state, const SimulationConfig& cfg,
                        const HistoryBuffer* history = nullptr);

}  // namespace oscsim
