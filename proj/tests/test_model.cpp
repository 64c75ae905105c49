#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "oscsim/errors.hpp"
#include "oscsim/model.hpp"
#include "oscsim/rng.hpp"
#include "oscsim/topology.hpp"

using namespace oscsim;

namespace {

bool has_code(const ValidationReport& rep, const std::string& code) {
  return std::any_of(rep.issues.begin(), rep.issues.end(),
                     [&](const ValidationIssue& i) { return i.code == code; });
}

SimulationConfig valid_base() {
  SimulationConfig cfg;
  cfg.oscillator_count = 4;
  cfg.topology = chain_topology(4, ChainDirection::bidirectional);
  return cfg;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("derived rates") {
  SimulationConfig cfg;
  cfg.t_comp = 0.9;
  cfg.t_comm = 0.1;
  CHECK(cfg.omega() == doctest::Approx(kTwoPi).epsilon(1e-15));

  cfg.protocol_factor = 2;
  cfg.comm_distance = 3.0;
  cfg.t_comp = 1.0;
  cfg.t_comm = 0.5;
  CHECK(cfg.coupling_velocity() == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("topology matrix basics") {
  TopologyMatrix t(3);
  CHECK(t.size() == 3);
  CHECK(t.edge_count() == 0);
  t.set_edge(1, 0);
  t.set_edge(2, 0);
  CHECK(t.influenced_by(1, 0));
  CHECK_FALSE(t.influenced_by(0, 1));
  CHECK(t.in_degree(0) == 0);
  CHECK(t.in_degree(1) == 1);
  CHECK(t.edge_count() == 2);
  CHECK_THROWS_AS(t.set_edge(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(t.set_edge(3, 0), std::out_of_range);
}

TEST_CASE("validation accepts a sane config") {
  CHECK(validate(valid_base()).ok());
}

TEST_CASE("validation reports every violation at once") {
  SimulationConfig cfg = valid_base();
  cfg.t_comp = 0.0;
  cfg.protocol_factor = 3;
  cfg.comm_distance = -1.0;
  const auto rep = validate(cfg);
  CHECK_FALSE(rep.ok());
  CHECK(rep.issues.size() >= 3);
  CHECK(has_code(rep, "NonPositiveDuration"));
  CHECK(has_code(rep, "InvalidValue"));
}

TEST_CASE("validation catches dimension mismatches") {
  SimulationConfig cfg = valid_base();
  cfg.topology = chain_topology(5, ChainDirection::bidirectional);
  CHECK(has_code(validate(cfg), "DimensionMismatch"));

  cfg = valid_base();
  cfg.delay = ConstantDelay{std::vector<double>(9, 0.0)};  // wrong size for P=4
  CHECK(has_code(validate(cfg), "DimensionMismatch"));
}

TEST_CASE("validation catches negative delays and bad potential params") {
  SimulationConfig cfg = valid_base();
  std::vector<double> tau(16, 0.0);
  tau[1] = -0.5;
  cfg.delay = ConstantDelay{tau};
  CHECK(has_code(validate(cfg), "DelayNegative"));

  cfg = valid_base();
  cfg.potential = TanhPotential{0.0};
  CHECK(has_code(validate(cfg), "InvalidPotentialParam"));

  cfg = valid_base();
  cfg.potential = PiecewiseSinPotential{-1.0};
  CHECK(has_code(validate(cfg), "InvalidPotentialParam"));
}

TEST_CASE("validation catches bad initial and integrator settings") {
  SimulationConfig cfg = valid_base();
  cfg.initial = LocalizedPerturbation{9, 0.1};  // count > P
  CHECK(has_code(validate(cfg), "InvalidInitialCondition"));

  cfg = valid_base();
  cfg.integrator.min_step = 0.5;  // above max_step
  CHECK_FALSE(validate(cfg).ok());

  cfg = valid_base();
  cfg.integrator.sample_interval = 0.0;
  CHECK_FALSE(validate(cfg).ok());
}

TEST_CASE("initial conditions materialize as specified") {
  const auto uniform = materialize_initial(UniformStart{}, 4);
  CHECK(uniform == std::vector<double>{0.0, 0.0, 0.0, 0.0});

  const auto linear = materialize_initial(LinearlySpacedStart{}, 4);
  REQUIRE(linear.size() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(linear[i] == doctest::Approx(kTwoPi * i / 4.0).epsilon(1e-15));

  const auto local = materialize_initial(LocalizedPerturbation{2, 0.3}, 4);
  CHECK(local == std::vector<double>{0.3, 0.3, 0.0, 0.0});

  // a "perturbation" of everyone at 0 is just the uniform start
  CHECK(materialize_initial(LocalizedPerturbation{4, 0.0}, 4) == uniform);
}

TEST_CASE("random start is deterministic and spans [0, 2pi)") {
  const auto a = materialize_initial(RandomStart{9}, 16);
  const auto b = materialize_initial(RandomStart{9}, 16);
  CHECK(a == b);
  for (double v : a) {
    CHECK(v >= 0.0);
    CHECK(v < kTwoPi);
  }
  const std::uint64_t s = derive_seed(9, kInitialStreamTag);
  CHECK(a[0] == kTwoPi * counter_uniform(s, 0));
  CHECK(a[7] == kTwoPi * counter_uniform(s, 7));
  CHECK(materialize_initial(RandomStart{10}, 16) != a);
}

}
