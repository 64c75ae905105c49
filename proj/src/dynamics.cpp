#include "oscsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oscsim/errors.hpp"
#include "oscsim/rng.hpp"

namespace oscsim {

namespace {
std::uint64_t interval_index(double t, double refresh) {
  if (t <= 0.0) return 0;
  // Snap times that sit a rounding error below a refresh boundary.
  return static_cast<std::uint64_t>(std::floor(t / refresh + 1e-9));
}
}  // namespace

// ---------- HistoryBuffer ----------

HistoryBuffer::HistoryBuffer(std::size_t p, std::vector<double> prehistory, double t_begin)
    : p_(p), t_begin_(t_begin), prehistory_(std::move(prehistory)) {
  if (prehistory_.size() != p_)
    throw std::invalid_argument("prehistory size does not match oscillator count");
}

double HistoryBuffer::newest_time() const {
  if (records_.empty()) return t_begin_;
  return records_.back().t0 + records_.back().h;
}

void HistoryBuffer::push_step(double t0, double h, std::vector<double> coeffs) {
  if (!(h > 0.0)) throw std::invalid_argument("history step must have positive length");
  if (coeffs.size() != 5 * p_)
    throw std::invalid_argument("history coefficients must have 5*P entries");
  const double tol = 1e-9 * std::max(1.0, std::abs(t0));
  if (std::abs(t0 - newest_time()) > tol)
    throw std::invalid_argument("history records must be contiguous in time");
  records_.push_back({t0, h, std::move(coeffs)});
  // Drop records that can no longer be reached by any delayed lookup.
  const double horizon = records_.back().t0 - retention_;
  while (records_.size() > 1 && records_.front().t0 + records_.front().h < horizon)
    records_.pop_front();
}

const HistoryBuffer::Record* HistoryBuffer::find(double t) const {
  auto it = std::upper_bound(records_.begin(), records_.end(), t,
                             [](double v, const Record& r) { return v < r.t0; });
  if (it == records_.begin()) {
    throw IntegrationError(IntegrationError::Kind::history_range,
                           "history lookup at t=" + std::to_string(t) +
                               " precedes retained records");
  }
  --it;
  const double eps = 1e-9 * std::max(1.0, std::abs(t));
  if (t > it->t0 + it->h + eps)
    throw IntegrationError(IntegrationError::Kind::history_range,
                           "history lookup at t=" + std::to_string(t) +
                               " is ahead of the newest record");
  return &*it;
}

double HistoryBuffer::component(double t, std::size_t j) const {
  if (t <= t_begin_ || records_.empty()) return prehistory_[j];
  const Record* r = find(t);
  const double x = std::clamp((t - r->t0) / r->h, 0.0, 1.0);
  const double* c = r->coeffs.data();
  return c[j] +
         x * (c[p_ + j] +
              (1.0 - x) * (c[2 * p_ + j] + x * (c[3 * p_ + j] + (1.0 - x) * c[4 * p_ + j])));
}

void HistoryBuffer::state(double t, std::span<double> out) const {
  if (t <= t_begin_ || records_.empty()) {
    std::copy(prehistory_.begin(), prehistory_.end(), out.begin());
    return;
  }
  const Record* r = find(t);
  const double x = std::clamp((t - r->t0) / r->h, 0.0, 1.0);
  const double* c = r->coeffs.data();
  for (std::size_t j = 0; j < p_; ++j)
    out[j] = c[j] + x * (c[p_ + j] + (1.0 - x) * (c[2 * p_ + j] +
                                                  x * (c[3 * p_ + j] + (1.0 - x) * c[4 * p_ + j])));
}

// ---------- NoiseStream ----------

NoiseStream::NoiseStream(const NoiseSpec& spec, std::size_t p)
    : spec_(spec), p_(p), stream_seed_(derive_seed(spec.seed, kNoiseStreamTag)) {}

std::uint64_t NoiseStream::interval_at(double t) const {
  return interval_index(t, spec_.refresh_interval);
}

void NoiseStream::values(std::uint64_t interval, std::span<double> r_out) const {
  for (std::size_t i = 0; i < p_; ++i)
    r_out[i] = counter_uniform(stream_seed_, interval * p_ + i);
}

std::vector<double> noise_sample(const NoiseStream& stream, double t,
                                 std::span<const double> base_velocity) {
  std::vector<double> zeta(base_velocity.size(), 0.0);
  if (!stream.active()) return zeta;
  std::vector<double> r(base_velocity.size());
  stream.values(stream.interval_at(t), r);
  for (std::size_t i = 0; i < zeta.size(); ++i)
    zeta[i] = stream.coefficient() * base_velocity[i] * r[i];
  return zeta;
}

// ---------- DelayStream ----------

DelayStream::DelayStream(const DelaySpec& spec, const TopologyMatrix& topology)
    : spec_(&spec), topology_(&topology), p_(topology.size()) {
  if (const auto* cd = std::get_if<ConstantDelay>(spec_)) {
    for (std::size_t i = 0; i < p_; ++i)
      for (std::size_t j = 0; j < p_; ++j)
        if (topology_->influenced_by(i, j))
          max_delay_ = std::max(max_delay_, cd->tau[i * p_ + j]);
  } else if (const auto* sd = std::get_if<StochasticDelay>(spec_)) {
    max_delay_ = sd->mean + sd->jitter;
    stream_seed_ = derive_seed(sd->seed, kDelayStreamTag);
  }
}

bool DelayStream::stochastic() const {
  return std::holds_alternative<StochasticDelay>(*spec_);
}

double DelayStream::refresh_interval() const {
  if (const auto* sd = std::get_if<StochasticDelay>(spec_)) return sd->refresh_interval;
  return 0.0;
}

std::uint64_t DelayStream::interval_at(double t) const {
  const double refresh = refresh_interval();
  return refresh > 0.0 ? interval_index(t, refresh) : 0;
}

double DelayStream::realize(std::uint64_t interval, std::vector<double>& tau_out) const {
  tau_out.assign(p_ * p_, 0.0);
  double min_positive = 0.0;
  auto note = [&min_positive](double tau) {
    if (tau > 0.0 && (min_positive == 0.0 || tau < min_positive)) min_positive = tau;
  };
  if (const auto* cd = std::get_if<ConstantDelay>(spec_)) {
    for (std::size_t i = 0; i < p_; ++i)
      for (std::size_t j = 0; j < p_; ++j)
        if (topology_->influenced_by(i, j)) {
          tau_out[i * p_ + j] = cd->tau[i * p_ + j];
          note(cd->tau[i * p_ + j]);
        }
  } else if (const auto* sd = std::get_if<StochasticDelay>(spec_)) {
    for (std::size_t i = 0; i < p_; ++i)
      for (std::size_t j = 0; j < p_; ++j)
        if (topology_->influenced_by(i, j)) {
          const double u = counter_uniform(stream_seed_, interval * p_ * p_ + i * p_ + j);
          const double tau = std::max(0.0, sd->mean + sd->jitter * (2.0 * u - 1.0));
          tau_out[i * p_ + j] = tau;
          note(tau);
        }
  }
  return min_positive;
}

double resolve_delay(const DelaySpec& spec, const TopologyMatrix& topology,
                     std::size_t i, std::size_t j, double t) {
  if (!topology.influenced_by(i, j)) return 0.0;
  if (std::holds_alternative<NoDelay>(spec)) return 0.0;
  const std::size_t p = topology.size();
  if (const auto* cd = std::get_if<ConstantDelay>(&spec)) return cd->tau[i * p + j];
  const auto& sd = std::get<StochasticDelay>(spec);
  const std::uint64_t interval = interval_index(t, sd.refresh_interval);
  const std::uint64_t seed = derive_seed(sd.seed, kDelayStreamTag);
  const double u = counter_uniform(seed, interval * p * p + i * p + j);
  return std::max(0.0, sd.mean + sd.jitter * (2.0 * u - 1.0));
}

// ---------- RhsEvaluator ----------

RhsEvaluator::RhsEvaluator(const SimulationConfig& cfg)
    : p_(cfg.oscillator_count),
      omega_(cfg.omega()),
      gain_(cfg.coupling_velocity() / static_cast<double>(cfg.oscillator_count)),
      noise_coefficient_(cfg.noise.coefficient),
      noise_base_(cfg.noise.base),
      potential_(cfg.potential) {
  nbr_start_.resize(p_ + 1, 0);
  for (std::size_t i = 0; i < p_; ++i) {
    nbr_start_[i] = static_cast<std::uint32_t>(nbr_flat_.size());
    for (std::size_t j = 0; j < p_; ++j)
      if (cfg.topology.influenced_by(i, j)) nbr_flat_.push_back(static_cast<std::uint32_t>(j));
  }
  nbr_start_[p_] = static_cast<std::uint32_t>(nbr_flat_.size());
}

std::span<const std::uint32_t> RhsEvaluator::neighbors(std::size_t i) const {
  return {nbr_flat_.data() + nbr_start_[i],
          static_cast<std::size_t>(nbr_start_[i + 1] - nbr_start_[i])};
}

void RhsEvaluator::eval(double t, std::span<const double> theta,
                        const HistoryBuffer* history, const double* r_noise,
                        const std::vector<double>* tau, std::span<double> dtheta) const {
  for (std::size_t i = 0; i < p_; ++i) {
    double acc = 0.0;
    const std::uint32_t* nb = nbr_flat_.data() + nbr_start_[i];
    const std::uint32_t* nb_end = nbr_flat_.data() + nbr_start_[i + 1];
    for (; nb != nb_end; ++nb) {
      const std::size_t j = *nb;
      double theta_j = theta[j];
      if (tau) {
        const double d = (*tau)[i * p_ + j];
        if (d > 0.0) theta_j = history->component(t - d, j);
      }
      acc += potential_(theta_j - theta[i]);
    }
    const double coupling = gain_ * acc;
    double v = omega_ + coupling;
    if (r_noise) {
      const double base = noise_base_ == NoiseBase::velocity ? omega_ + coupling : omega_;
      v += noise_coefficient_ * r_noise[i] * base;
    }
    dtheta[i] = v;
  }
}

std::vector<double> rhs(const PhaseState& state, const SimulationConfig& cfg,
                        const HistoryBuffer* history) {
  const std::size_t p = cfg.oscillator_count;
  if (state.theta.size() != p)
    throw std::invalid_argument("state dimension does not match config");
  const RhsEvaluator f(cfg);

  std::vector<double> r;
  const double* r_ptr = nullptr;
  const NoiseStream noise(cfg.noise, p);
  if (noise.active()) {
    r.resize(p);
    noise.values(noise.interval_at(state.t), r);
    r_ptr = r.data();
  }

  std::vector<double> tau;
  const std::vector<double>* tau_ptr = nullptr;
  const DelayStream delays(cfg.delay, cfg.topology);
  if (delays.max_delay() > 0.0) {
    const double min_positive = delays.realize(delays.interval_at(state.t), tau);
    if (min_positive > 0.0) {
      if (!history)
        throw IntegrationError(IntegrationError::Kind::history_range,
                               "delayed rhs evaluation requires a history buffer");
      tau_ptr = &tau;
    }
  }

  std::vector<double> dtheta(p);
  f.eval(state.t, state.theta, history, r_ptr, tau_ptr, dtheta);
  return dtheta;
}

}  // namespace oscsim
