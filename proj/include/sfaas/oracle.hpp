#pragma once

#include <limits>
#include <vector>

namespace sfaas::oracle {

// Mean response time, or Unstable when the queue grows without bound.
// Instability is a value, not an error, so curves can be tabulated through
// their divergence point.
class Response {
 public:
  static Response stable(double seconds) { return Response(seconds); }
  static Response unstable() { return Response(); }

  bool is_stable() const { return stable_; }
  explicit operator bool() const { return stable_; }
  // +inf when unstable.
  double seconds() const { return seconds_; }

  friend bool operator==(const Response&, const Response&) = default;

 private:
  Response() = default;
  explicit Response(double s) : seconds_(s), stable_(true) {}
  double seconds_ = std::numeric_limits<double>::infinity();
  bool stable_ = false;
};

struct Rates {
  double arrival_per_client = 4.5 / 60.0;
  double local_service = 1.0;
  double remote_service = 1.0 / 3.0;
};

// Stable iff offered load < servers, or there is no load at all.
bool is_stable(double arrival_rate, double service_rate, int servers);

Response mm1_response(double lambda, double mu);

// Probability that an arrival waits in M/M/c with offered load a. Erlang-B by
// recurrence, then Erlang-C, so large c never touches factorials.
// Returns 1.0 when a >= c.
double erlang_c(int c, double a);

Response mmc_response(double lambda, double mu, int c);

struct SplitLatency {
  int clients = 0;
  int local = 0;
  Response local_response = Response::unstable();   // per local client (M/M/1)
  Response remote_response = Response::unstable();  // remote pool (M/M/c)
  Response average = Response::unstable();          // weighted by client counts
};

// Static split of `clients` onto `local` dedicated containers and a remote pool
// of `containers - local`. Throws ConfigError unless 0 <= local <= min(N, C).
SplitLatency scenario1_latency(int clients, int local, int containers = 40, const Rates& r = {});

// Largest L <= min(N, C) with a stable remote pool, -1 if even L = 0 is
// unstable.
int stability_frontier(int clients, int containers = 40, const Rates& r = {});

// argmin over stable L of the weighted latency; ties toward smaller L.
// Returns -1 when no stable L exists.
int scenario1_optimal_split(int clients, int containers = 40, const Rates& r = {});

// Full table for L = 0..min(N, C).
std::vector<SplitLatency> scenario1_table(int clients, int containers = 40, const Rates& r = {});

}  // namespace sfaas::oracle
