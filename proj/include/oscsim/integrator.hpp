#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oscsim/model.hpp"

namespace oscsim {

struct StepStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t rhs_evals = 0;
};

// Phase samples on the uniform sample_interval grid plus the final state at
// t_end.  The first sample is the initial condition at t = 0.
struct Trajectory {
  std::size_t p = 0;
  std::vector<double> times;
  std::vector<double> states;  // times.size() x p, row-major
  StepStats stats;

  std::size_t sample_count() const { return times.size(); }
  std::span<const double> state(std::size_t k) const {
    return {states.data() + k * p, p};
  }
};

// Adaptive Dormand-Prince 5(4) with a 4th-order continuous extension.
// Delayed terms use the method of steps: the step never exceeds the smallest
// active delay, so lookups always land in completed history.  Noise and
// stochastic-delay refresh times are step barriers; the solution is sampled
// from the dense output, so the sample grid never perturbs the step sequence.
Trajectory integrate(const SimulationConfig& cfg);

// Same machinery with a forced constant step and no error control
// (diagnostics; used for order studies).
Trajectory integrate_fixed(const SimulationConfig& cfg, double step);

}  // namespace oscsim
