#include "oscsim/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "oscsim/rng.hpp"

namespace oscsim {

void TopologyMatrix::set_edge(std::size_t i, std::size_t j, bool present) {
  if (i >= p_ || j >= p_) throw std::out_of_range("topology edge index out of range");
  if (i == j) throw std::invalid_argument("self-coupling edges are not allowed");
  entries_[i * p_ + j] = present ? 1 : 0;
}

std::size_t TopologyMatrix::in_degree(std::size_t i) const {
  std::size_t n = 0;
  for (std::size_t j = 0; j < p_; ++j) n += entries_[i * p_ + j];
  return n;
}

std::size_t TopologyMatrix::edge_count() const {
  std::size_t n = 0;
  for (auto e : entries_) n += e;
  return n;
}

std::string ValidationReport::summary() const {
  std::ostringstream ss;
  for (const auto& it : issues)
    ss << it.code << " (" << it.field << "): " << it.message << "\n";
  return ss.str();
}

namespace {

void add(ValidationReport& rep, const char* code, const char* field, std::string msg) {
  rep.issues.push_back({code, field, std::move(msg)});
}

void require_positive_duration(ValidationReport& rep, const char* field, double v) {
  if (!(v > 0.0) || !std::isfinite(v))
    add(rep, "NonPositiveDuration", field, "must be a positive finite duration");
}

}  // namespace

ValidationReport validate(const SimulationConfig& cfg) {
  ValidationReport rep;
  const std::size_t p = cfg.oscillator_count;

  if (p < 1) add(rep, "DimensionMismatch", "P", "oscillator count must be at least 1");
  require_positive_duration(rep, "t_comp", cfg.t_comp);
  require_positive_duration(rep, "t_comm", cfg.t_comm);
  require_positive_duration(rep, "t_end", cfg.t_end);
  if (cfg.protocol_factor != 1 && cfg.protocol_factor != 2)
    add(rep, "InvalidValue", "beta", "protocol factor must be 1 (eager) or 2 (rendezvous)");
  if (!(cfg.comm_distance > 0.0) || !std::isfinite(cfg.comm_distance))
    add(rep, "InvalidValue", "kappa", "communication distance must be positive");

  if (cfg.topology.size() != p)
    add(rep, "DimensionMismatch", "topology",
        "topology is " + std::to_string(cfg.topology.size()) + "x" +
            std::to_string(cfg.topology.size()) + " but P = " + std::to_string(p));

  if (const auto* t = std::get_if<TanhPotential>(&cfg.potential)) {
    if (!(t->sharpness > 0.0) || !std::isfinite(t->sharpness))
      add(rep, "InvalidPotentialParam", "potential.sharpness", "must be positive");
  } else if (const auto* pw = std::get_if<PiecewiseSinPotential>(&cfg.potential)) {
    if (!(pw->width > 0.0) || !std::isfinite(pw->width))
      add(rep, "InvalidPotentialParam", "potential.width", "must be positive");
  } else if (const auto* f = std::get_if<FourierPotential>(&cfg.potential)) {
    if (f->harmonics < 1)
      add(rep, "InvalidPotentialParam", "potential.harmonics", "must be at least 1");
    if (!std::isfinite(f->a) || !std::isfinite(f->b))
      add(rep, "InvalidPotentialParam", "potential.a", "coefficients must be finite");
  }

  if (!(cfg.noise.coefficient >= 0.0) || !std::isfinite(cfg.noise.coefficient))
    add(rep, "InvalidValue", "noise.coefficient", "must be non-negative");
  require_positive_duration(rep, "noise.refresh_interval", cfg.noise.refresh_interval);

  if (const auto* cd = std::get_if<ConstantDelay>(&cfg.delay)) {
    if (cd->tau.size() != p * p)
      add(rep, "DimensionMismatch", "delay.tau",
          "delay matrix must have P*P = " + std::to_string(p * p) + " entries");
    for (double tau : cd->tau)
      if (tau < 0.0 || !std::isfinite(tau)) {
        add(rep, "DelayNegative", "delay.tau", "delays must be finite and >= 0");
        break;
      }
  } else if (const auto* sd = std::get_if<StochasticDelay>(&cfg.delay)) {
    if (sd->mean < 0.0 || !std::isfinite(sd->mean))
      add(rep, "DelayNegative", "delay.mean", "must be finite and >= 0");
    if (sd->jitter < 0.0 || !std::isfinite(sd->jitter))
      add(rep, "DelayNegative", "delay.jitter", "must be finite and >= 0");
    require_positive_duration(rep, "delay.refresh_interval", sd->refresh_interval);
  }

  if (const auto* lp = std::get_if<LocalizedPerturbation>(&cfg.initial)) {
    if (lp->count > p)
      add(rep, "InvalidInitialCondition", "initial.count",
          "perturbed count exceeds oscillator count");
    if (!std::isfinite(lp->value))
      add(rep, "InvalidInitialCondition", "initial.value", "must be finite");
  }

  const auto& io = cfg.integrator;
  if (!(io.rel_tol > 0.0) || !(io.abs_tol > 0.0))
    add(rep, "InvalidValue", "integrator.tolerances", "tolerances must be positive");
  if (!(io.min_step > 0.0) || !(io.min_step <= io.initial_step) ||
      !(io.initial_step <= io.max_step))
    add(rep, "InvalidValue", "integrator.steps",
        "need 0 < min_step <= initial_step <= max_step");
  require_positive_duration(rep, "integrator.sample_interval", io.sample_interval);

  return rep;
}

std::vector<double> materialize_initial(const InitialCondition& init, std::size_t p) {
  std::vector<double> theta(p, 0.0);
  if (std::holds_alternative<UniformStart>(init)) {
    return theta;
  }
  if (const auto* r = std::get_if<RandomStart>(&init)) {
    const std::uint64_t s = derive_seed(r->seed, kInitialStreamTag);
    for (std::size_t i = 0; i < p; ++i) theta[i] = kTwoPi * counter_uniform(s, i);
    return theta;
  }
  if (std::holds_alternative<LinearlySpacedStart>(init)) {
    for (std::size_t i = 0; i < p; ++i)
      theta[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(p);
    return theta;
  }
  const auto& lp = std::get<LocalizedPerturbation>(init);
  if (lp.count > p) throw std::invalid_argument("perturbed count exceeds oscillator count");
  for (std::size_t i = 0; i < lp.count; ++i) theta[i] = lp.value;
  return theta;
}

}  // namespace oscsim
