#pragma once

#include <utility>

#include "sfaas/domain.hpp"

namespace sfaas {

struct PhaseRates {
  double remote_to_local = 0.0;  // per second
  double local_to_remote = 0.0;  // per second
};

// Rates of a two-state continuous-time chain whose stationary Local fraction is
// `f_local` and whose mean Local sojourn is `mean_local_s`.
// Throws ConfigError unless 0 <= f_local < 1 and mean_local_s > 0.
PhaseRates phase_rates(double f_local, double mean_local_s);

// How the preference process is clocked.
enum class PhaseChain : std::uint8_t {
  Continuous,     // exponential sojourns, asynchronous to invocations
  PerInvocation,  // coin flip at each invocation arrival
};

// Client preference process driving application-triggered transitions.
class PhaseProcess {
 public:
  PhaseProcess() = default;
  PhaseProcess(double f_local, double mean_local_s);

  double f_local() const { return f_local_; }
  double mean_local_s() const { return mean_local_s_; }
  const PhaseRates& rates() const { return rates_; }
  bool enabled() const { return f_local_ > 0.0; }

  // Stationary Local probability implied by the rates.
  double stationary_local() const;

  // Initial preference drawn from the stationary distribution.
  Mode initial_preference(RngStream& stream) const;

  // Per-invocation switch probabilities for PhaseChain::PerInvocation, given the
  // client's arrival rate. Same stationary fraction, same mean Local duration.
  PhaseRates per_invocation_probabilities(double arrival_rate) const;

 private:
  double f_local_ = 0.0;
  double mean_local_s_ = 300.0;
  PhaseRates rates_{};
};

// now + Exp(arrival_rate) drawn from the client's arrival stream.
SimTime next_arrival(ClientState& client, SimTime now);

struct PhaseChange {
  SimTime at;
  Mode new_preference;
};

// Exponential sojourn in the client's current preference, then a toggle.
// Returns nullopt when the process is disabled (f_local == 0).
std::optional<PhaseChange> next_phase_change(ClientState& client, const PhaseProcess& process,
                                             SimTime now);

}  // namespace sfaas
