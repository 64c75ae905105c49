#include "oscsim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oscsim/dynamics.hpp"
#include "oscsim/errors.hpp"

namespace oscsim {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b_hat (embedded 4th-order error weights)
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous-extension weights (Hairer, Norsett, Wanner).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kShrinkFloor = 0.2;
constexpr double kGrowthCap = 5.0;

struct Sampler {
  double interval;
  double t_end;
  std::uint64_t next_index = 0;

  double next_time() const {
    const double t = static_cast<double>(next_index) * interval;
    return std::min(t, t_end);
  }
};

Trajectory integrate_impl(const SimulationConfig& cfg, bool adaptive, double fixed_step) {
  {
    const ValidationReport rep = validate(cfg);
    if (!rep.ok()) throw ConfigError("invalid configuration:\n" + rep.summary());
  }
  if (!adaptive && !(fixed_step > 0.0)) throw ConfigError("fixed step must be positive");

  const std::size_t p = cfg.oscillator_count;
  const IntegratorOptions& opt = cfg.integrator;
  const double t_end = cfg.t_end;
  const RhsEvaluator f(cfg);

  std::vector<double> y = materialize_initial(cfg.initial, p);

  HistoryBuffer hist(p, y);
  const NoiseStream noise(cfg.noise, p);
  const DelayStream delays(cfg.delay, cfg.topology);
  hist.set_retention(delays.max_delay());

  std::vector<double> r_noise;
  const double* r_ptr = nullptr;
  std::uint64_t noise_iv = 0;
  if (noise.active()) {
    r_noise.resize(p);
    noise.values(noise_iv, r_noise);
    r_ptr = r_noise.data();
  }

  std::vector<double> tau;
  const std::vector<double>* tau_ptr = nullptr;
  std::uint64_t delay_iv = 0;
  double tau_min_pos = 0.0;
  if (delays.max_delay() > 0.0) {
    tau_min_pos = delays.realize(delay_iv, tau);
    if (tau_min_pos > 0.0 || delays.stochastic()) tau_ptr = &tau;
  }

  Trajectory out;
  out.p = p;
  const auto n_est = static_cast<std::size_t>(t_end / opt.sample_interval) + 2;
  out.times.reserve(n_est);
  out.states.reserve(n_est * p);

  Sampler sampler{opt.sample_interval, t_end};
  auto emit = [&](double ts, std::span<const double> state) {
    out.times.push_back(ts);
    out.states.insert(out.states.end(), state.begin(), state.end());
    ++sampler.next_index;
  };
  emit(0.0, y);  // first sample is the initial condition

  std::vector<double> k1(p), k2(p), k3(p), k4(p), k5(p), k6(p), k7(p);
  std::vector<double> ystage(p), y1(p), herr(p);
  std::vector<double> coeffs(5 * p);

  double t = 0.0;
  f.eval(t, y, &hist, r_ptr, tau_ptr, k1);
  out.stats.rhs_evals = 1;

  double h_prop = adaptive ? std::clamp(opt.initial_step, opt.min_step, opt.max_step)
                           : fixed_step;
  bool just_rejected = false;

  const double end_eps = 1e-12 * std::max(1.0, t_end);

  while (t < t_end - end_eps) {
    // Structural caps: end of run, refresh barriers, smallest active delay.
    double h = adaptive ? std::min(h_prop, opt.max_step) : fixed_step;
    h = std::min(h, t_end - t);
    if (noise.active()) {
      const double barrier =
          static_cast<double>(noise.interval_at(t) + 1) * noise.refresh_interval();
      h = std::min(h, barrier - t);
    }
    if (delays.stochastic()) {
      const double barrier =
          static_cast<double>(delays.interval_at(t) + 1) * delays.refresh_interval();
      h = std::min(h, barrier - t);
    }
    if (tau_min_pos > 0.0) h = std::min(h, tau_min_pos);
    if (!(h > 0.0))
      throw IntegrationError(IntegrationError::Kind::step_underflow,
                             "step collapsed to zero at t=" + std::to_string(t));

    auto stage = [&](double ci, std::span<const double> kfrom, std::vector<double>& kout) {
      f.eval(t + ci * h, kfrom, &hist, r_ptr, tau_ptr, kout);
    };
    for (std::size_t i = 0; i < p; ++i) ystage[i] = y[i] + h * a21 * k1[i];
    stage(c2, ystage, k2);
    for (std::size_t i = 0; i < p; ++i)
      ystage[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    stage(c3, ystage, k3);
    for (std::size_t i = 0; i < p; ++i)
      ystage[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    stage(c4, ystage, k4);
    for (std::size_t i = 0; i < p; ++i)
      ystage[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    stage(c5, ystage, k5);
    for (std::size_t i = 0; i < p; ++i)
      ystage[i] =
          y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    stage(1.0, ystage, k6);
    for (std::size_t i = 0; i < p; ++i)
      y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    stage(1.0, y1, k7);
    out.stats.rhs_evals += 6;

    double err = 0.0;
    if (adaptive) {
      for (std::size_t i = 0; i < p; ++i) {
        herr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                       e7 * k7[i]);
        const double sk = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
        const double q = herr[i] / sk;
        err += q * q;
      }
      err = std::sqrt(err / static_cast<double>(p));
    }

    if (adaptive && !(err <= 1.0)) {  // reject (also catches non-finite err)
      ++out.stats.rejected;
      just_rejected = true;
      const double fac = std::isfinite(err)
                             ? std::max(kShrinkFloor, kSafety * std::pow(err, -0.2))
                             : 0.5;
      h_prop = h * fac;
      if (h_prop < opt.min_step) {
        if (!std::isfinite(err))
          throw IntegrationError(IntegrationError::Kind::non_finite_state,
                                 "state became non-finite near t=" + std::to_string(t));
        throw IntegrationError(IntegrationError::Kind::step_underflow,
                               "error control requires step below min_step at t=" +
                                   std::to_string(t));
      }
      continue;
    }

    for (std::size_t i = 0; i < p; ++i)
      if (!std::isfinite(y1[i]))
        throw IntegrationError(IntegrationError::Kind::non_finite_state,
                               "state became non-finite near t=" + std::to_string(t));

    // Continuous extension over [t, t+h].
    for (std::size_t i = 0; i < p; ++i) {
      const double dy = y1[i] - y[i];
      const double bspl = h * k1[i] - dy;
      coeffs[i] = y[i];
      coeffs[p + i] = dy;
      coeffs[2 * p + i] = bspl;
      coeffs[3 * p + i] = dy - h * k7[i] - bspl;
      coeffs[4 * p + i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                               d6 * k6[i] + d7 * k7[i]);
    }
    hist.push_step(t, h, coeffs);

    double t_new = t + h;
    if (t_new > t_end - end_eps) t_new = t_end;

    // Emit all grid samples inside (t, t_new].
    const double snap = 1e-9 * std::max(1.0, std::abs(t_new));
    while (sampler.next_index * opt.sample_interval <= t_end + snap) {
      const double ts = sampler.next_time();
      if (ts > t_new + snap) break;
      if (std::abs(ts - t_new) <= snap) {
        emit(ts, y1);
      } else {
        hist.state(ts, ystage);
        emit(ts, ystage);
      }
      if (ts >= t_end - end_eps) break;
    }

    ++out.stats.accepted;
    t = t_new;
    std::swap(y, y1);
    std::swap(k1, k7);  // FSAL

    // Cross refresh barriers: advance the stochastic contexts and invalidate
    // the reused stage when the right-hand side changed discontinuously.
    bool ctx_changed = false;
    if (noise.active()) {
      const std::uint64_t iv = noise.interval_at(t);
      if (iv != noise_iv) {
        noise_iv = iv;
        noise.values(iv, r_noise);
        ctx_changed = true;
      }
    }
    if (delays.stochastic()) {
      const std::uint64_t iv = delays.interval_at(t);
      if (iv != delay_iv) {
        delay_iv = iv;
        tau_min_pos = delays.realize(iv, tau);
        ctx_changed = true;
      }
    }
    if (ctx_changed && t < t_end - end_eps) {
      f.eval(t, y, &hist, r_ptr, tau_ptr, k1);
      ++out.stats.rhs_evals;
    }

    if (adaptive) {
      const double cap = just_rejected ? 1.0 : kGrowthCap;
      const double fac =
          err > 0.0 ? std::clamp(kSafety * std::pow(err, -0.2), kShrinkFloor, cap) : cap;
      h_prop = std::min(h * fac, opt.max_step);
      just_rejected = false;
    }
  }

  // The loop guarantees a final sample at t_end (grid or snap); guard anyway.
  if (out.times.empty() || out.times.back() < t_end - end_eps) {
    out.times.push_back(t_end);
    out.states.insert(out.states.end(), y.begin(), y.end());
  }
  return out;
}

}  // namespace

Trajectory integrate(const SimulationConfig& cfg) { return integrate_impl(cfg, true, 0.0); }

Trajectory integrate_fixed(const SimulationConfig& cfg, double step) {
  return integrate_impl(cfg, false, step);
}

}  // namespace oscsim
