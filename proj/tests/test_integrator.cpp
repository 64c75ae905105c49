#include <cmath>
#include <vector>

#include "doctest.h"
#include "oscsim/dynamics.hpp"
#include "oscsim/errors.hpp"
#include "oscsim/integrator.hpp"
#include "oscsim/topology.hpp"

using namespace oscsim;

namespace {

// Plain fixed-step RK4 over the undelayed, noise-free vector field.
std::vector<double> rk4_reference(const SimulationConfig& cfg, double dt) {
  const RhsEvaluator f(cfg);
  const std::size_t p = cfg.oscillator_count;
  std::vector<double> y = materialize_initial(cfg.initial, p);
  std::vector<double> k1(p), k2(p), k3(p), k4(p), tmp(p);
  double t = 0.0;
  while (t < cfg.t_end - 1e-12) {
    const double h = std::min(dt, cfg.t_end - t);
    f.eval(t, y, nullptr, nullptr, nullptr, k1);
    for (std::size_t i = 0; i < p; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    f.eval(t + 0.5 * h, tmp, nullptr, nullptr, nullptr, k2);
    for (std::size_t i = 0; i < p; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    f.eval(t + 0.5 * h, tmp, nullptr, nullptr, nullptr, k3);
    for (std::size_t i = 0; i < p; ++i) tmp[i] = y[i] + h * k3[i];
    f.eval(t + h, tmp, nullptr, nullptr, nullptr, k4);
    for (std::size_t i = 0; i < p; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t += h;
  }
  return y;
}

SimulationConfig kuramoto_pair() {
  SimulationConfig cfg;
  cfg.oscillator_count = 2;
  cfg.topology = chain_topology(2, ChainDirection::bidirectional);
  cfg.potential = SinPotential{};
  cfg.comm_distance = 2.0;  // v_p = K = 2
  cfg.initial = LocalizedPerturbation{1, 1.0};
  cfg.t_end = 2.0;
  return cfg;
}

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("uncoupled oscillators advance at exactly omega") {
  SimulationConfig cfg;
  cfg.oscillator_count = 3;
  cfg.topology = TopologyMatrix(3);
  cfg.initial = LinearlySpacedStart{};
  cfg.t_end = 1.5;
  const auto traj = integrate(cfg);
  const auto theta0 = materialize_initial(cfg.initial, 3);
  for (std::size_t k = 0; k < traj.sample_count(); ++k)
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(traj.state(k)[i] ==
            doctest::Approx(theta0[i] + cfg.omega() * traj.times[k]).epsilon(1e-12));
}

TEST_CASE("symmetric pair matches the closed-form gap decay") {
  const SimulationConfig cfg = kuramoto_pair();
  const auto traj = integrate(cfg);
  const auto last = traj.state(traj.sample_count() - 1);
  // d(gap)/dt = -K sin(gap): tan(gap/2) = tan(1/2) e^{-K t}
  const double expect = 2.0 * std::atan(std::tan(0.5) * std::exp(-4.0));
  CHECK(last[1] - last[0] == doctest::Approx(-expect).epsilon(1e-6));
  // the mean phase rides the natural frequency untouched
  CHECK(last[0] + last[1] - 2.0 * cfg.omega() * cfg.t_end ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("fixed-step mode reproduces the same solution") {
  const SimulationConfig cfg = kuramoto_pair();
  const auto traj = integrate_fixed(cfg, 1e-3);
  const auto last = traj.state(traj.sample_count() - 1);
  const double expect = 2.0 * std::atan(std::tan(0.5) * std::exp(-4.0));
  CHECK(last[1] - last[0] == doctest::Approx(-expect).epsilon(1e-6));
}

TEST_CASE("adaptive solution agrees with an rk4 reference") {
  SimulationConfig cfg;
  cfg.oscillator_count = 4;
  cfg.topology = chain_topology(4, ChainDirection::bidirectional);
  cfg.potential = SinPotential{};
  cfg.comm_distance = 2.0;
  cfg.initial = RandomStart{5};
  cfg.t_end = 5.0;
  const auto traj = integrate(cfg);
  const auto ref = rk4_reference(cfg, 1e-4);
  const auto last = traj.state(traj.sample_count() - 1);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(last[i] == doctest::Approx(ref[i]).epsilon(1e-6));
}

TEST_CASE("sample grid covers [0, t_end] with the final time included") {
  SimulationConfig cfg;
  cfg.oscillator_count = 2;
  cfg.topology = chain_topology(2, ChainDirection::bidirectional);
  cfg.integrator.sample_interval = 0.03;
  cfg.t_end = 0.1;
  cfg.initial = LocalizedPerturbation{1, 0.5};
  const auto traj = integrate(cfg);
  REQUIRE(traj.sample_count() == 5);
  CHECK(traj.times[0] == 0.0);
  CHECK(traj.times[1] == 0.03);
  CHECK(traj.times[3] == 3 * 0.03);
  CHECK(traj.times[4] == 0.1);
  // first sample is the initial state, bit for bit
  CHECK(traj.state(0)[0] == 0.5);
  CHECK(traj.state(0)[1] == 0.0);
}

TEST_CASE("integration is deterministic") {
  SimulationConfig cfg = kuramoto_pair();
  cfg.noise.coefficient = 2.0;
  cfg.noise.seed = 17;
  const auto a = integrate(cfg);
  const auto b = integrate(cfg);
  CHECK(a.times == b.times);
  CHECK(a.states == b.states);
}

TEST_CASE("sampling interval does not perturb the solution") {
  SimulationConfig coarse = kuramoto_pair();
  coarse.integrator.sample_interval = 0.01;
  SimulationConfig fine = kuramoto_pair();
  fine.integrator.sample_interval = 0.0025;
  const auto a = integrate(coarse);
  const auto b = integrate(fine);
  for (std::size_t k = 0; k < a.sample_count() - 1; ++k) {
    REQUIRE(b.times[4 * k] == doctest::Approx(a.times[k]).epsilon(1e-15));
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(b.state(4 * k)[i] == doctest::Approx(a.state(k)[i]).epsilon(1e-12));
  }
}

TEST_CASE("a zero delay matrix is bit-identical to no delay") {
  SimulationConfig plain = kuramoto_pair();
  SimulationConfig zero = kuramoto_pair();
  zero.delay = ConstantDelay{std::vector<double>(4, 0.0)};
  const auto a = integrate(plain);
  const auto b = integrate(zero);
  CHECK(a.times == b.times);
  CHECK(a.states == b.states);
}

TEST_CASE("constant delay matches a piecewise-analytic reference") {
  SimulationConfig cfg;
  cfg.oscillator_count = 2;
  cfg.topology = chain_topology(2, ChainDirection::unidirectional);
  cfg.potential = SinPotential{};
  cfg.comm_distance = 2.0;  // gain = 1
  std::vector<double> tau(4, 0.0);
  tau[1 * 2 + 0] = 0.25;
  cfg.delay = ConstantDelay{tau};
  cfg.t_end = 3.0;
  const auto traj = integrate(cfg);
  const auto last = traj.state(traj.sample_count() - 1);
  const double w = cfg.omega();
  CHECK(last[0] == doctest::Approx(w * 3.0).epsilon(1e-9));

  // follower sees theta_0(t - 1/4), which is 0 before t = 1/4 and w (t - 1/4) after
  double y = 0.0, t = 0.0;
  const double dt = 1e-4;
  auto src = [&](double tt) { return tt < 0.25 ? 0.0 : w * (tt - 0.25); };
  auto f = [&](double tt, double yy) { return w + std::sin(src(tt) - yy); };
  while (t < 3.0 - 1e-12) {
    const double h = std::min(dt, 3.0 - t);
    const double k1 = f(t, y);
    const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  CHECK(last[1] == doctest::Approx(y).epsilon(2e-5));
}

TEST_CASE("stochastic delays integrate deterministically") {
  SimulationConfig cfg = kuramoto_pair();
  StochasticDelay sd;
  sd.mean = 0.05;
  sd.jitter = 0.02;
  sd.seed = 9;
  sd.refresh_interval = 0.1;
  cfg.delay = sd;
  const auto a = integrate(cfg);
  const auto b = integrate(cfg);
  CHECK(a.states == b.states);
  CHECK(std::isfinite(a.states.back()));
}

TEST_CASE("noise seed changes the path, inactive noise ignores the seed") {
  SimulationConfig cfg = kuramoto_pair();
  cfg.noise.coefficient = 2.0;
  cfg.noise.seed = 1;
  const auto a = integrate(cfg);
  cfg.noise.seed = 2;
  const auto b = integrate(cfg);
  CHECK(a.states != b.states);

  cfg.noise.coefficient = 0.0;
  const auto c = integrate(cfg);
  cfg.noise.seed = 99;
  const auto d = integrate(cfg);
  CHECK(c.states == d.states);
}

TEST_CASE("an impossible tolerance raises a step underflow") {
  SimulationConfig cfg = kuramoto_pair();
  cfg.integrator.rel_tol = 1e-14;
  cfg.integrator.abs_tol = 1e-16;
  cfg.integrator.min_step = 0.04;
  cfg.integrator.initial_step = 0.05;
  bool threw = false;
  try {
    integrate(cfg);
  } catch (const IntegrationError& e) {
    threw = true;
    CHECK(e.kind == IntegrationError::Kind::step_underflow);
  }
  CHECK(threw);
}

TEST_CASE("invalid configs are rejected before integration") {
  SimulationConfig cfg = kuramoto_pair();
  cfg.t_comp = -1.0;
  CHECK_THROWS_AS(integrate(cfg), ConfigError);
}

}
