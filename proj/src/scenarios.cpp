#include "oscsim/scenarios.hpp"

#include "oscsim/errors.hpp"

namespace oscsim {

namespace {

// Sweep-style solver run: the head rank starts three quarters of a cycle
// ahead and the rest chase it down a one-way chain until the line locks.
Scenario gssor_uni() {
  Scenario s;
  s.name = "gssor-uni";
  s.summary = "unidirectional sweep resynchronization after a head-rank perturbation";
  s.config = {
      {"seed", "12"},
      {"oscillators", "18"},
      {"kappa", "8"},
      {"t_end", "60"},
      {"topology.kind", "chain"},
      {"topology.direction", "uni"},
      {"potential.kind", "tanh"},
      {"potential.sharpness", "8"},
      {"initial.kind", "localized"},
      {"initial.count", "1"},
      {"initial.value", "4.71238898038469"},
      {"integrator.sample_interval", "0.05"},
      {"output.heatmap_interval", "6"},
  };
  return s;
}

// Same line solved with symmetric (rendezvous) exchanges in both directions.
Scenario gssor_bidir() {
  Scenario s = gssor_uni();
  s.name = "gssor-bidir";
  s.summary = "bidirectional rendezvous variant of gssor-uni";
  s.config["topology.direction"] = "bidir";
  s.config["protocol"] = "rendezvous";
  return s;
}

// Multiplicative rate noise. Each run is repeated across seeds; the sweep
// summary reports the median resynchronization time per noise level.
Scenario noise_sweep() {
  Scenario s;
  s.name = "noise-sweep";
  s.summary = "resynchronization time versus noise amplitude";
  s.config = {
      {"seed", "7"},
      {"oscillators", "8"},
      {"kappa", "2"},
      {"t_end", "25"},
      {"topology.kind", "chain"},
      {"topology.direction", "bidir"},
      {"potential.kind", "tanh"},
      {"potential.sharpness", "6"},
      {"initial.kind", "random"},
      {"noise.coefficient", "2"},
      {"noise.base", "velocity"},
      {"noise.refresh_interval", "5e-05"},
      {"integrator.min_step", "1e-06"},
      {"integrator.sample_interval", "0.02"},
  };
  s.sweep = ScenarioSweep{"noise.coefficient", {"2", "3", "5", "6", "10", "15", "20"}, 10};
  return s;
}

// Jacobi-style symmetric exchange with a short-range repulsive potential:
// neighbors settle at a fixed spacing and the line spreads around the circle.
Scenario jacobi_desync() {
  Scenario s;
  s.name = "jacobi-desync";
  s.summary = "desynchronization into an evenly spaced wavefront";
  s.config = {
      {"seed", "3"},
      {"oscillators", "36"},
      {"kappa", "8"},
      {"t_end", "60"},
      {"topology.kind", "chain"},
      {"topology.direction", "bidir"},
      {"potential.kind", "piecewise_sin"},
      {"potential.width", "0.5235987755982988"},
      {"initial.kind", "linear"},
      {"integrator.sample_interval", "0.05"},
      {"output.heatmap_interval", "6"},
  };
  return s;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"gssor-uni", "gssor-bidir",
                                                 "noise-sweep", "jacobi-desync"};
  return names;
}

Scenario scenario_by_name(const std::string& name) {
  if (name == "gssor-uni") return gssor_uni();
  if (name == "gssor-bidir") return gssor_bidir();
  if (name == "noise-sweep") return noise_sweep();
  if (name == "jacobi-desync") return jacobi_desync();
  std::string known;
  for (const auto& n : scenario_names()) known += " " + n;
  throw ConfigError("unknown scenario '" + name + "'; known:" + known);
}

}  // namespace oscsim
