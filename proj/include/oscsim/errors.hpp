#pragma once

#include <stdexcept>
#include <string>

namespace oscsim {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration values, malformed config/topology files, unknown keys.
struct ConfigError : SimError {
  using SimError::SimError;
};

struct IntegrationError : SimError {
  enum class Kind { step_underflow, non_finite_state, history_range };
  IntegrationError(Kind k, const std::string& msg) : SimError(msg), kind(k) {}
  Kind kind;
};

struct TraceError : SimError {
  enum class Kind { parse, monotonicity, missing_rank, out_of_range, incompatible };
  TraceError(Kind k, const std::string& msg) : SimError(msg), kind(k) {}
  Kind kind;
};

struct IoError : SimError {
  using SimError::SimError;
};

}  // namespace oscsim
