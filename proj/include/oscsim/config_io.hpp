#pragma once

// Plain-text configuration: one "key = value" per line, '#' comments,
// dotted keys grouped by subsystem (topology.*, potential.*, noise.*,
// delay.*, initial.*, integrator.*, output.*).
//
// A raw key/value map is resolved before use: every default is filled in
// explicitly, subsystem seeds are derived from the master `seed` when not
// given, and keys that do not apply to the chosen kinds are rejected.
// Serializing the resolved map yields a manifest that reproduces the run
// exactly when fed back in; `meta.*` keys are carried along but ignored.

#include <filesystem>
#include <map>
#include <string>

#include "oscsim/model.hpp"

namespace oscsim {

using KeyValueMap = std::map<std::string, std::string>;

struct OutputOptions {
  double heatmap_interval = 0.0;  // 0: pick a stride that yields ~10 snapshots
  bool wrap_heatmap = false;
  bool wrapped_gradient = false;
  bool circle = false;
};

struct LoadedConfig {
  SimulationConfig sim;
  OutputOptions output;
  KeyValueMap resolved;
};

KeyValueMap parse_config_text(const std::string& text);
KeyValueMap load_config_file(const std::filesystem::path& path);

// Split "key=value" and insert/overwrite; throws ConfigError on bad form.
void apply_override(KeyValueMap& map, const std::string& assignment);

// Fill defaults, derive unset subsystem seeds from `seed`, and reject
// unknown or inapplicable keys. Idempotent on its own output.
KeyValueMap resolve_config(const KeyValueMap& raw);

// resolve + construct; throws ConfigError if the result fails validation.
LoadedConfig build_config(const KeyValueMap& raw);

// Deterministic text form (sorted keys, round-trip number formatting).
std::string serialize_config(const KeyValueMap& resolved);

}  // namespace oscsim
