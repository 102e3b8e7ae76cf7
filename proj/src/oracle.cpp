#include "sfaas/oracle.hpp"

#include <algorithm>

#include "sfaas/errors.hpp"

namespace sfaas::oracle {

namespace {

// Relative slack so loads that are integers in exact arithmetic (e.g. 40
// clients * 0.225 = 9 erlangs) are not declared stable by rounding.
constexpr double kStabilitySlack = 1e-12;

}  // namespace

bool is_stable(double arrival_rate, double service_rate, int servers) {
  if (arrival_rate <= 0.0) return true;
  return arrival_rate < servers * service_rate * (1.0 - kStabilitySlack);
}

Response mm1_response(double lambda, double mu) {
  if (!is_stable(lambda, mu, 1)) return Response::unstable();
  return Response::stable(1.0 / (mu - lambda));
}

double erlang_c(int c, double a) {
  if (c < 1) throw ConfigError("erlang_c needs at least one server");
  if (a <= 0.0) return 0.0;
  if (a >= c) return 1.0;
  double b = 1.0;
  for (int k = 1; k <= c; ++k) b = a * b / (k + a * b);
  const double rho = a / c;
  return b / (1.0 - rho * (1.0 - b));
}

Response mmc_response(double lambda, double mu, int c) {
  if (c < 1) return lambda <= 0.0 ? Response::stable(1.0 / mu) : Response::unstable();
  if (!is_stable(lambda, mu, c)) return Response::unstable();
  return Response::stable(1.0 / mu + erlang_c(c, lambda / mu) / (c * mu - lambda));
}

SplitLatency scenario1_latency(int clients, int local, int containers, const Rates& r) {
  if (clients < 1) throw ConfigError("scenario 1 needs at least one client");
  if (local < 0 || local > std::min(clients, containers)) {
    throw ConfigError("local container count must lie in [0, min(clients, containers)]");
  }
  SplitLatency s;
  s.clients = clients;
  s.local = local;
  s.local_response = mm1_response(r.arrival_per_client, r.local_service);
  const int remote_clients = clients - local;
  const int pool = containers - local;
  s.remote_response = mmc_response(remote_clients * r.arrival_per_client, r.remote_service, pool);

  const bool local_ok = local == 0 || s.local_response.is_stable();
  const bool remote_ok = remote_clients == 0 || s.remote_response.is_stable();
  if (!local_ok || !remote_ok) return s;
  double sum = 0.0;
  if (local > 0) sum += local * s.local_response.seconds();
  if (remote_clients > 0) sum += remote_clients * s.remote_response.seconds();
  s.average = Response::stable(sum / clients);
  return s;
}

int stability_frontier(int clients, int containers, const Rates& r) {
  int best = -1;
  for (int l = 0; l <= std::min(clients, containers); ++l) {
    if (is_stable((clients - l) * r.arrival_per_client, r.remote_service, containers - l)) best = l;
  }
  return best;
}

std::vector<SplitLatency> scenario1_table(int clients, int containers, const Rates& r) {
  std::vector<SplitLatency> rows;
  const int max_l = std::min(clients, containers);
  rows.reserve(static_cast<std::size_t>(max_l) + 1);
  for (int l = 0; l <= max_l; ++l) rows.push_back(scenario1_latency(clients, l, containers, r));
  return rows;
}

int scenario1_optimal_split(int clients, int containers, const Rates& r) {
  int best = -1;
  double best_w = 0.0;
  for (const auto& row : scenario1_table(clients, containers, r)) {
    if (!row.average) continue;
    if (best < 0 || row.average.seconds() < best_w) {
      best = row.local;
      best_w = row.average.seconds();
    }
  }
  return best;
}

}  // namespace sfaas::oracle
