#pragma once

#include <cmath>

#include "oscsim/model.hpp"

namespace oscsim {

// V(x) for the raw (unwrapped) phase difference x.  All four families are
// antisymmetric and globally bounded.
double potential_eval(const PotentialSpec& spec, double x);

// sup |V| over the reals.
double potential_bound(const PotentialSpec& spec);

// Samples n points on (0, half_range] and checks V(-x) == -V(x) to tol.
bool is_antisymmetric_witness(const PotentialSpec& spec, int n = 64,
                              double half_range = 4.0, double tol = 1e-12);

// Flattened evaluator for inner loops (no variant dispatch per call site).
class PotentialFn {
 public:
  PotentialFn() = default;
  explicit PotentialFn(const PotentialSpec& spec);

  double operator()(double x) const {
    switch (kind_) {
      case Kind::sine:
        return std::sin(x);
      case Kind::tanh_sat:
        return std::tanh(a_ * x);
      case Kind::piecewise: {
        if (x > -w_ && x < w_) return -std::sin(a_ * x);
        return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
      }
      case Kind::fourier:
        return std::sin(x) - a_ * std::sin(n_ * x) + b_ * std::sin(2.0 * n_ * x);
    }
    return 0.0;
  }

 private:
  enum class Kind { sine, tanh_sat, piecewise, fourier } kind_ = Kind::sine;
  double a_ = 0.0, b_ = 0.0, w_ = 0.0, n_ = 1.0;
};

}  // namespace oscsim
