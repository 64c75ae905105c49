#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace oscsim {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------- phase state ----------

struct PhaseState {
  std::vector<double> theta;
  double t = 0.0;
};

// ---------- topology ----------

// Directed influence matrix: entry (i, j) == 1 means oscillator i receives
// from (is influenced by) oscillator j.  Diagonal is always zero.
class TopologyMatrix {
 public:
  TopologyMatrix() = default;
  explicit TopologyMatrix(std::size_t p, bool periodic = false)
      : p_(p), periodic_(periodic), entries_(p * p, 0) {}

  std::size_t size() const { return p_; }
  bool periodic() const { return periodic_; }
  void set_periodic(bool v) { periodic_ = v; }

  bool influenced_by(std::size_t i, std::size_t j) const {
    return entries_[i * p_ + j] != 0;
  }
  void set_edge(std::size_t i, std::size_t j, bool present = true);

  std::size_t in_degree(std::size_t i) const;
  std::size_t edge_count() const;

  const std::vector<std::uint8_t>& entries() const { return entries_; }

  bool operator==(const TopologyMatrix&) const = default;

 private:
  std::size_t p_ = 0;
  bool periodic_ = false;
  std::vector<std::uint8_t> entries_;
};

// ---------- interaction potentials ----------

struct SinPotential {
  bool operator==(const SinPotential&) const = default;
};

struct TanhPotential {
  double sharpness = 1.0;  // > 0
  bool operator==(const TanhPotential&) const = default;
};

// -sin(3*pi/(2*width) * x) inside |x| < width, sgn(x) outside.
struct PiecewiseSinPotential {
  double width = 1.0;  // > 0
  bool operator==(const PiecewiseSinPotential&) const = default;
};

// sin(x) - a*sin(n*x) + b*sin(2*n*x)
struct FourierPotential {
  double a = 0.0;
  double b = 0.0;
  int harmonics = 1;  // n >= 1
  bool operator==(const FourierPotential&) const = default;
};

using PotentialSpec =
    std::variant<SinPotential, TanhPotential, PiecewiseSinPotential, FourierPotential>;

// ---------- noise ----------

// Which velocity the multiplicative noise is applied to.
enum class NoiseBase {
  intrinsic,  // zeta_i = c * omega * r_i(t)
  velocity,   // zeta_i = c * (omega + coupling_i) * r_i(t)
};

struct NoiseSpec {
  double coefficient = 0.0;  // c >= 0; c = 0 disables noise
  std::uint64_t seed = 1;
  double refresh_interval = 0.01;  // > 0; r redrawn at multiples of this
  NoiseBase base = NoiseBase::intrinsic;
  bool operator==(const NoiseSpec&) const = default;
};

// ---------- delays ----------

struct NoDelay {
  bool operator==(const NoDelay&) const = default;
};

struct ConstantDelay {
  std::vector<double> tau;  // P*P row-major, entries >= 0
  bool operator==(const ConstantDelay&) const = default;
};

// tau_ij(t) = max(0, mean + jitter*u), u uniform on [-1, 1), redrawn per
// edge at multiples of refresh_interval, deterministic in the seed.
struct StochasticDelay {
  double mean = 0.0;    // >= 0
  double jitter = 0.0;  // >= 0
  std::uint64_t seed = 1;
  double refresh_interval = 0.01;  // > 0
  bool operator==(const StochasticDelay&) const = default;
};

using DelaySpec = std::variant<NoDelay, ConstantDelay, StochasticDelay>;

// ---------- initial conditions ----------

struct UniformStart {
  bool operator==(const UniformStart&) const = default;
};

struct RandomStart {
  std::uint64_t seed = 1;
  bool operator==(const RandomStart&) const = default;
};

struct LinearlySpacedStart {
  bool operator==(const LinearlySpacedStart&) const = default;
};

// First `count` oscillators start at `value`, the rest at 0.
struct LocalizedPerturbation {
  std::size_t count = 1;
  double value = 0.0;
  bool operator==(const LocalizedPerturbation&) const = default;
};

using InitialCondition =
    std::variant<UniformStart, RandomStart, LinearlySpacedStart, LocalizedPerturbation>;

// ---------- integrator options ----------

struct IntegratorOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double initial_step = 1e-3;
  double max_step = 0.05;
  double min_step = 1e-4;       // error-control floor, not a structural floor
  double sample_interval = 0.01;
  bool operator==(const IntegratorOptions&) const = default;
};

// ---------- full simulation config ----------

struct SimulationConfig {
  std::size_t oscillator_count = 2;  // P
  double t_comp = 0.9;
  double t_comm = 0.1;
  int protocol_factor = 1;     // beta: 1 eager, 2 rendezvous
  double comm_distance = 1.0;  // kappa
  TopologyMatrix topology;
  PotentialSpec potential = SinPotential{};
  NoiseSpec noise;
  DelaySpec delay = NoDelay{};
  InitialCondition initial = UniformStart{};
  double t_end = 1.0;
  IntegratorOptions integrator;

  double omega() const { return kTwoPi / (t_comp + t_comm); }
  double coupling_velocity() const {  // v_p
    return static_cast<double>(protocol_factor) * comm_distance / (t_comp + t_comm);
  }
};

// ---------- validation ----------

struct ValidationIssue {
  std::string code;   // DimensionMismatch, NonPositiveDuration, ...
  std::string field;  // config path of the offending value
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

// Checks every invariant and reports all violations, not just the first.
ValidationReport validate(const SimulationConfig& cfg);

// Concrete initial phase vector for P oscillators.
std::vector<double> materialize_initial(const InitialCondition& init, std::size_t p);

}  // namespace oscsim
