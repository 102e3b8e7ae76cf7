#include "sfaas/provisioning.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>

#include "sfaas/errors.hpp"
#include "sfaas/policies.hpp"

namespace sfaas {

double binomial_denial_estimate(int clients, double f, int containers, const oracle::Rates& r) {
  if (f <= 0.0) return 0.0;
  const int bound = oracle::stability_frontier(clients, containers, r);
  if (bound < 0) return 1.0;
  boost::math::binomial_distribution<double> dist(clients, f);
  double excess = 0.0;
  for (int k = bound + 1; k <= clients; ++k) excess += (k - bound) * boost::math::pdf(dist, k);
  return excess / (clients * f);
}

int provisioning_lower_bound(int clients, double f, double target, const oracle::Rates& r) {
  int c = stability_bound(clients, r);
  if (f <= 0.0) return c;
  const double mean_local = f * clients;
  const int ceiling = saturation_bound(clients, r);
  for (; c < ceiling; ++c) {
    const int bound = oracle::stability_frontier(clients, c, r);
    if (std::max(0.0, mean_local - bound) / mean_local <= target) break;
  }
  return c;
}

int estimated_min_containers(int clients, double f, double target, const oracle::Rates& r) {
  int c = provisioning_lower_bound(clients, f, target, r);
  const int ceiling = saturation_bound(clients, r);
  while (c < ceiling && binomial_denial_estimate(clients, f, c, r) > target) ++c;
  return c;
}

int saturation_bound(int clients, const oracle::Rates& r) {
  return clients + static_cast<int>(std::ceil(clients * r.arrival_per_client / r.remote_service)) + 1;
}

const Probe* ProvisionResult::at_min() const {
  for (const auto& p : probes) {
    if (p.containers == min_containers) return &p;
  }
  return nullptr;
}

Probe run_admission_probe(int clients, double f, double mean_local_s, int containers, double target,
                          const ProvisionOptions& opts) {
  PlatformParams params = opts.base;
  params.clients = clients;
  params.containers = containers;
  params.policy = AdmissionOnDemand{};
  params.phase = PhaseProcess(f, mean_local_s);

  const auto reps = run_replications(params, opts.replication);
  const auto runs = summaries(reps);
  Probe p;
  p.containers = containers;
  p.aggregate = aggregate(runs);
  if (p.aggregate.unstable) return p;
  p.denial_upper = p.aggregate.denial ? std::clamp(p.aggregate.denial->hi(), 0.0, 1.0) : 0.0;
  p.pass = p.denial_upper <= target;
  return p;
}

ProvisionResult provision_search(int clients, double f, double mean_local_s, double target,
                                 const ProvisionOptions& opts) {
  if (clients < 1) throw ConfigError("provisioning search needs at least one client");
  if (!(f >= 0.0 && f < 1.0)) throw ConfigError("f_local must lie in [0, 1)");
  if (!(target > 0.0 && target <= 1.0)) throw ConfigError("target_denial must lie in (0, 1]");

  oracle::Rates rates{opts.base.arrival_rate, opts.base.function.local_service_rate,
                      opts.base.function.remote_service_rate};
  ProvisionResult res;
  res.clients = clients;
  res.f_local = f;
  res.target = target;
  res.lower_bound = provisioning_lower_bound(clients, f, target, rates);
  int ceiling = saturation_bound(clients, rates);
  if (opts.max_containers) ceiling = std::min(ceiling, *opts.max_containers);

  auto probe = [&](int c) {
    res.probes.push_back(run_admission_probe(clients, f, mean_local_s, c, target, opts));
    return res.probes.back().pass;
  };

  if (res.lower_bound > ceiling) {
    res.min_containers = ceiling;
    res.saturated = true;
    return res;
  }
  int c = std::clamp(estimated_min_containers(clients, f, target, rates), res.lower_bound, ceiling);
  if (probe(c)) {
    while (c - 1 >= res.lower_bound && probe(c - 1)) --c;
    res.min_containers = c;
    return res;
  }
  for (++c; c <= ceiling; ++c) {
    if (probe(c)) {
      res.min_containers = c;
      return res;
    }
  }
  res.min_containers = ceiling;
  res.saturated = true;
  return res;
}

}  // namespace sfaas
