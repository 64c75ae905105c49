#include "oscsim/potentials.hpp"

#include <cmath>
#include <numbers>

namespace oscsim {

PotentialFn::PotentialFn(const PotentialSpec& spec) {
  if (std::holds_alternative<SinPotential>(spec)) {
    kind_ = Kind::sine;
  } else if (const auto* t = std::get_if<TanhPotential>(&spec)) {
    kind_ = Kind::tanh_sat;
    a_ = t->sharpness;
  } else if (const auto* pw = std::get_if<PiecewiseSinPotential>(&spec)) {
    kind_ = Kind::piecewise;
    w_ = pw->width;
    a_ = 3.0 * std::numbers::pi / (2.0 * pw->width);
  } else {
    const auto& f = std::get<FourierPotential>(spec);
    kind_ = Kind::fourier;
    a_ = f.a;
    b_ = f.b;
    n_ = static_cast<double>(f.harmonics);
  }
}

double potential_eval(const PotentialSpec& spec, double x) {
  return PotentialFn(spec)(x);
}

double potential_bound(const PotentialSpec& spec) {
  if (const auto* f = std::get_if<FourierPotential>(&spec))
    return 1.0 + std::abs(f->a) + std::abs(f->b);
  return 1.0;
}

bool is_antisymmetric_witness(const PotentialSpec& spec, int n, double half_range,
                              double tol) {
  const PotentialFn v(spec);
  for (int k = 1; k <= n; ++k) {
    const double x = half_range * static_cast<double>(k) / static_cast<double>(n);
    if (std::abs(v(-x) + v(x)) > tol) return false;
  }
  return std::abs(v(0.0)) <= tol;
}

}  // namespace oscsim
