#pragma once

#include <variant>
#include <vector>

#include "sfaas/domain.hpp"
#include "sfaas/oracle.hpp"

namespace sfaas {

// Network-triggered static split: clients 0..local-1 get dedicated containers
// at t = 0 and keep them.
struct StaticSplit {
  int local = 0;
};

// Application-triggered transitions admitted on demand by grant_local().
struct AdmissionOnDemand {};

using SplitPolicy = std::variant<StaticSplit, AdmissionOnDemand>;

// Clients to bind at t = 0. Throws ConfigError when local > min(clients, containers).
std::vector<ClientId> apply_static_split(int local, int clients, int containers);

// What the admission rule sees at a resource check.
struct CapacityView {
  int clients = 0;          // N
  int containers = 0;       // C
  int unbound = 0;          // containers still in the remote pool
  int committed_local = 0;  // clients bound locally or with a local transition in flight
  double arrival_rate = 0.0;
  double remote_service_rate = 0.0;
};

enum class Decision { Grant, Deny };

// Grant iff a pool container is available and, after the grant, the clients
// left on the remote pool still form a stable M/M/c system.
Decision grant_local(const CapacityView& view);

// Smallest C whose all-remote pool is stable: floor(N * lambda / mu_r) + 1.
int stability_bound(int clients, const oracle::Rates& r = {});

}  // namespace sfaas
