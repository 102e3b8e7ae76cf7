#include "sfaas/workload.hpp"

#include "sfaas/errors.hpp"

namespace sfaas {

PhaseRates phase_rates(double f_local, double mean_local_s) {
  if (!(f_local >= 0.0 && f_local < 1.0)) throw ConfigError("f_local must lie in [0, 1)");
  if (!(mean_local_s > 0.0)) throw ConfigError("mean local duration must be positive");
  const double to_remote = 1.0 / mean_local_s;
  const double to_local = f_local / ((1.0 - f_local) * mean_local_s);
  return {to_local, to_remote};
}

PhaseProcess::PhaseProcess(double f_local, double mean_local_s)
    : f_local_(f_local), mean_local_s_(mean_local_s), rates_(phase_rates(f_local, mean_local_s)) {}

double PhaseProcess::stationary_local() const {
  return rates_.remote_to_local / (rates_.remote_to_local + rates_.local_to_remote);
}

Mode PhaseProcess::initial_preference(RngStream& stream) const {
  if (!enabled()) return Mode::Remote;
  return stream.uniform01() <= f_local_ ? Mode::Local : Mode::Remote;
}

PhaseRates PhaseProcess::per_invocation_probabilities(double arrival_rate) const {
  const double invocations_per_local = mean_local_s_ * arrival_rate;
  if (!(invocations_per_local >= 1.0)) {
    throw ConfigError("per-invocation phase chain needs mean_local_duration_s * arrival rate >= 1");
  }
  const double p_to_remote = 1.0 / invocations_per_local;
  const double p_to_local = f_local_ / (1.0 - f_local_) * p_to_remote;
  if (p_to_local > 1.0) throw ConfigError("per-invocation phase chain: f_local too large");
  return {p_to_local, p_to_remote};
}

SimTime next_arrival(ClientState& client, SimTime now) {
  return now + exp_sample(client.arrival_rate, client.arrival_stream);
}

std::optional<PhaseChange> next_phase_change(ClientState& client, const PhaseProcess& process,
                                             SimTime now) {
  if (!process.enabled()) return std::nullopt;
  const bool local = client.preferred_mode == Mode::Local;
  const double rate = local ? process.rates().local_to_remote : process.rates().remote_to_local;
  return PhaseChange{now + exp_sample(rate, client.phase_stream),
                     local ? Mode::Remote : Mode::Local};
}

}  // namespace sfaas
