#include "sfaas/policies.hpp"

#include <algorithm>
#include <cmath>

#include "sfaas/errors.hpp"

namespace sfaas {

std::vector<ClientId> apply_static_split(int local, int clients, int containers) {
  if (clients < 1 || containers < 0) throw ConfigError("static split needs clients >= 1 and containers >= 0");
  if (local < 0 || local > std::min(clients, containers)) {
    throw ConfigError("local_containers must lie in [0, min(clients, containers)]");
  }
  std::vector<ClientId> bound(static_cast<std::size_t>(local));
  for (int i = 0; i < local; ++i) bound[static_cast<std::size_t>(i)] = static_cast<ClientId>(i);
  return bound;
}

Decision grant_local(const CapacityView& v) {
  if (v.unbound < 1) return Decision::Deny;
  const int bound_after = v.committed_local + 1;
  const int remote_clients = v.clients - bound_after;
  const int pool_after = v.containers - bound_after;
  if (!oracle::is_stable(remote_clients * v.arrival_rate, v.remote_service_rate, pool_after)) {
    return Decision::Deny;
  }
  return Decision::Grant;
}

int stability_bound(int clients, const oracle::Rates& r) {
  int c = static_cast<int>(std::floor(clients * r.arrival_per_client / r.remote_service));
  while (c > 0 && oracle::is_stable(clients * r.arrival_per_client, r.remote_service, c - 1)) --c;
  while (!oracle::is_stable(clients * r.arrival_per_client, r.remote_service, c)) ++c;
  return c;
}

}  // namespace sfaas
