#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscsim/config_io.hpp"

namespace oscsim {

// Sweep one key over a list of values, re-running each value with
// `seeds` different master seeds (seed, seed+1, ...).
struct ScenarioSweep {
  std::string key;
  std::vector<std::string> values;
  std::size_t seeds = 10;
};

struct Scenario {
  std::string name;
  std::string summary;
  KeyValueMap config;
  std::optional<ScenarioSweep> sweep;
};

const std::vector<std::string>& scenario_names();
Scenario scenario_by_name(const std::string& name);

}  // namespace oscsim
