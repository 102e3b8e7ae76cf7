#pragma once

#include <optional>
#include <vector>

#include "sfaas/metrics.hpp"
#include "sfaas/oracle.hpp"
#include "sfaas/platform.hpp"
#include "sfaas/runner.hpp"

namespace sfaas {

// Long-run per-invocation denial if preferences were independent Binomial(N, f)
// and every local-preferring client beyond the admissible maximum were denied:
// E[(K - B)^+] / E[K], B = largest stable local count with C containers.
double binomial_denial_estimate(int clients, double f_local, int containers, const oracle::Rates& r = {});

// Smallest C no lower than the stability bound for which even the mean
// preference count fits: (fN - B(C))^+ / (fN) <= target. Since the long-run
// denial can only exceed this, no smaller C can meet the target.
int provisioning_lower_bound(int clients, double f_local, double target, const oracle::Rates& r = {});

// Smallest C whose binomial estimate meets the target; the search starts here.
int estimated_min_containers(int clients, double f_local, double target, const oracle::Rates& r = {});

// Search ceiling: N + ceil(N * lambda / mu_r) + 1.
int saturation_bound(int clients, const oracle::Rates& r = {});

struct ProvisionOptions {
  PlatformParams base;  // clients, containers, policy and phase are set per probe
  ReplicationOptions replication;
  std::optional<int> max_containers;
};

struct Probe {
  int containers = 0;
  Aggregate aggregate;
  double denial_upper = 0.0;  // 95% CI upper bound, clamped to [0, 1]
  bool pass = false;
};

struct ProvisionResult {
  int clients = 0;
  double f_local = 0.0;
  double target = 0.0;
  int min_containers = 0;  // the saturation bound when saturated
  bool saturated = false;
  int lower_bound = 0;
  std::vector<Probe> probes;  // in the order they ran
  const Probe* at_min() const;
  double ratio() const { return static_cast<double>(min_containers) / clients; }
};

// Smallest C whose simulated per-invocation denial has a CI upper bound within
// `target` and whose remote pool is stable in every replication. Replications
// share seeds across C (common random numbers).
ProvisionResult provision_search(int clients, double f_local, double mean_local_s, double target,
                                 const ProvisionOptions& opts);

// One admission-policy configuration, aggregated over replications.
Probe run_admission_probe(int clients, double f_local, double mean_local_s, int containers,
                          double target, const ProvisionOptions& opts);

}  // namespace sfaas
