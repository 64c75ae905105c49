#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oscsim/metrics.hpp"
#include "oscsim/topology.hpp"

using namespace oscsim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("metrics") {

TEST_CASE("wrapping") {
  CHECK(wrap_to_pi(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0).epsilon(1e-15));
  CHECK(wrap_to_pi(kPi) == doctest::Approx(-kPi).epsilon(1e-15));  // range [-pi, pi)
  CHECK(wrap_to_pi(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(wrap_to_2pi(-kPi / 2.0) == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-15));
  CHECK(wrap_to_2pi(kTwoPi) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(wrap_to_2pi(7.0 * kTwoPi + 0.25) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("order parameter of a quarter-turn pair") {
  const std::vector<double> theta = {0.0, kPi / 2.0};
  const auto op = order_parameter(theta);
  CHECK(op.r == doctest::Approx(0.7071067811865476).epsilon(1e-14));
  CHECK(op.psi == doctest::Approx(0.7853981633974483).epsilon(1e-14));
  CHECK(op.psi_defined);
}

TEST_CASE("order parameter extremes") {
  const std::vector<double> locked(5, 1.3);
  const auto one = order_parameter(locked);
  CHECK(one.r == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.r <= 1.0);

  const std::vector<double> fourfold = {0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0};
  const auto zero = order_parameter(fourfold);
  CHECK(zero.r < 1e-12);
  CHECK_FALSE(zero.psi_defined);
  CHECK(zero.psi == 0.0);
}

TEST_CASE("order parameter ignores global rotations") {
  std::vector<double> theta = {0.1, 1.0, 2.5, 4.0};
  const double r0 = order_parameter(theta).r;
  for (double& v : theta) v += 17.3;
  CHECK(order_parameter(theta).r == doctest::Approx(r0).epsilon(1e-12));
}

TEST_CASE("entropy of two tight clusters is ln 2") {
  const std::vector<double> theta = {0.5, 0.5, 0.5, 0.5, 4.5, 4.5, 4.5, 4.5};
  const auto e = sync_entropy(theta);
  CHECK(e.bins == 2);
  CHECK(e.s == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("entropy of four spread phases") {
  const std::vector<double> theta = {kPi / 4.0, 3.0 * kPi / 4.0, 5.0 * kPi / 4.0,
                                     7.0 * kPi / 4.0};
  const auto e = sync_entropy(theta);
  CHECK(e.bins == 3);
  CHECK(e.s == doctest::Approx(1.039720770836918).epsilon(1e-9));
}

TEST_CASE("entropy degenerates to zero for identical phases") {
  const std::vector<double> theta(6, 2.2);
  const auto e = sync_entropy(theta);
  CHECK(e.bins == 1);
  CHECK(e.s == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("entropy separates clustered from spread states") {
  std::vector<double> spread(64), cluster(64);
  for (std::size_t i = 0; i < 64; ++i) {
    spread[i] = kTwoPi * i / 64.0;
    cluster[i] = 0.5 + 1e-3 * i;
  }
  CHECK(sync_entropy(spread).s > 1.0);
  CHECK(sync_entropy(cluster).s < 0.1);
}

TEST_CASE("phase gradient against hand-worked chains") {
  const std::vector<double> theta = {0.0, 1.0, 3.0};
  const auto uni = phase_gradient(theta, chain_topology(3, ChainDirection::unidirectional));
  CHECK(uni == std::vector<double>{0.0, 1.0, 2.0});
  const auto bidir =
      phase_gradient(theta, chain_topology(3, ChainDirection::bidirectional));
  CHECK(bidir == std::vector<double>{1.0, 3.0, 2.0});
}

TEST_CASE("wrapped gradient folds large separations") {
  const std::vector<double> theta = {0.0, 3.0 * kPi / 2.0};
  const auto raw = phase_gradient(theta, chain_topology(2, ChainDirection::bidirectional));
  CHECK(raw[0] == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-15));
  const auto wrapped =
      phase_gradient(theta, chain_topology(2, ChainDirection::bidirectional), true);
  CHECK(wrapped[0] == doctest::Approx(kPi / 2.0).epsilon(1e-15));
  CHECK(wrapped[1] == doctest::Approx(kPi / 2.0).epsilon(1e-15));
}

TEST_CASE("pairwise differences enumerate the lower triangle") {
  const std::vector<double> theta = {0.0, 1.0, 2.0};
  CHECK(pairwise_differences(theta) == std::vector<double>{-1.0, -2.0, -1.0});
}

TEST_CASE("difference heatmap rows and antisymmetry") {
  const std::vector<double> theta = {0.0, 1.0, 2.0};
  const auto m = difference_heatmap(theta);
  CHECK(m == std::vector<double>{0.0, 1.0, 2.0, -1.0, 0.0, 1.0, -2.0, -1.0, 0.0});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(m[i * 3 + j] == -m[j * 3 + i]);

  const std::vector<double> wide = {0.0, 3.0 * kPi / 2.0};
  const auto wrapped = difference_heatmap(wide, true);
  CHECK(wrapped[0 * 2 + 1] == doctest::Approx(-kPi / 2.0).epsilon(1e-15));
}

TEST_CASE("potential energy counts both directions of an edge") {
  const std::vector<double> theta = {0.0, kPi / 2.0};
  const auto topo = chain_topology(2, ChainDirection::bidirectional);
  const PotentialFn v{PotentialSpec{SinPotential{}}};
  CHECK(potential_energy(theta, topo, v) == doctest::Approx(2.0).epsilon(1e-14));
  const std::vector<double> synced = {0.7, 0.7};
  CHECK(potential_energy(synced, topo, v) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("phase circle positions") {
  const std::vector<double> theta = {0.0, kPi / 2.0};
  const auto xy = phase_circle(theta);
  CHECK(xy[0][0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(xy[0][1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(xy[1][0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(xy[1][1] == doctest::Approx(1.0).epsilon(1e-15));
  // rotating frame removes a uniform drift
  const std::vector<double> later = {kTwoPi, kTwoPi + kPi / 2.0};
  const auto back = phase_circle(later, 1.0, kTwoPi);
  CHECK(back[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(back[1][1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resynchronization time with a hold window") {
  const std::vector<double> t = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<double> r = {0, 0, 0, 1, 1, 1, 1, 0, 1, 1, 1};
  CHECK(resync_time(t, r, 0.5, 3.0) == 3.0);
  CHECK(resync_time(t, r, 0.5, 2.0) == 3.0);
  // the long window cannot fit after the dropout
  CHECK_FALSE(resync_time(t, r, 0.5, 4.0).has_value());
  const std::vector<double> tail = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1};
  CHECK(resync_time(t, tail, 0.5, 2.0) == 8.0);
  CHECK_FALSE(resync_time(t, tail, 0.5, 3.0).has_value());
}

TEST_CASE("metric series over a small trajectory") {
  const std::size_t p = 3;
  const std::vector<double> times = {0.0, 1.0, 2.0};
  std::vector<double> states;
  for (double t : times)
    for (std::size_t i = 0; i < p; ++i) states.push_back(0.1 * i + t);

  MetricSelection sel;
  sel.circle = true;
  const auto topo = chain_topology(p, ChainDirection::bidirectional);
  const auto series = compute_metrics(times, states, p, topo, SinPotential{}, sel);

  auto find = [&](const std::string& name) -> const MetricSeries* {
    for (const auto& s : series)
      if (s.name == name) return &s;
    return nullptr;
  };
  REQUIRE(find("R"));
  REQUIRE(find("psi"));
  REQUIRE(find("entropy"));
  REQUIRE(find("gradient"));
  REQUIRE(find("pairwise"));
  REQUIRE(find("heatmap"));
  REQUIRE(find("potential"));
  REQUIRE(find("circle"));

  CHECK(find("R")->times == times);
  CHECK(find("R")->width == 1);
  CHECK(find("gradient")->width == p);
  CHECK(find("pairwise")->width == 3);
  CHECK(find("heatmap")->kind == SeriesKind::matrix);
  CHECK(find("heatmap")->width == p * p);
  CHECK(find("circle")->width == 2 * p);

  // rigid rotation: R constant, psi tracks the drift
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(find("R")->values[k] == doctest::Approx(find("R")->values[0]).epsilon(1e-12));
    CHECK(find("gradient")->row(k)[1] == doctest::Approx(0.2).epsilon(1e-12));
  }

  // the heatmap keeps the final sample even on a sparse stride
  CHECK(find("heatmap")->times.back() == times.back());
}

TEST_CASE("scalar series round-trips through csv") {
  MetricSeries s;
  s.name = "R";
  s.kind = SeriesKind::scalar;
  s.times = {0.0, 0.1, 0.2};
  s.values = {1.0, 0.3333333333333333, 1e-17};
  const auto dir = std::filesystem::temp_directory_path() / "oscsim_series_rt";
  std::filesystem::create_directories(dir);
  write_series_csv(s, dir);
  const auto back = load_scalar_series_csv(dir / "R.csv");
  CHECK(back.times == s.times);
  CHECK(back.values == s.values);
}

}
