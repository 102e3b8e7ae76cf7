#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sfaas/errors.hpp"
#include "sfaas/oracle.hpp"
#include "sfaas/policies.hpp"
#include "sfaas/provisioning.hpp"

using namespace sfaas;

namespace {

constexpr double kLambda = 4.5 / 60.0;

CapacityView view(int n, int c, int unbound, int committed) {
  return {n, c, unbound, committed, kLambda, 1.0 / 3.0};
}

ProvisionOptions quick_options() {
  ProvisionOptions o;
  o.base.horizon = 2.0e4;
  o.base.warmup = 2.0e3;
  o.replication.replications = 4;
  o.replication.master_seed = 5;
  return o;
}

}  // namespace

TEST_CASE("static split binds the first L clients") {
  auto b = apply_static_split(3, 10, 5);
  CHECK(b == std::vector<ClientId>{0, 1, 2});
  CHECK(apply_static_split(0, 10, 5).empty());
  CHECK(apply_static_split(5, 10, 5).size() == 5);
  CHECK_THROWS_AS(apply_static_split(6, 10, 5), ConfigError);
  CHECK_THROWS_AS(apply_static_split(4, 3, 5), ConfigError);
  CHECK_THROWS_AS(apply_static_split(-1, 3, 5), ConfigError);
}

TEST_CASE("grant needs a free pool container") {
  CHECK(grant_local(view(10, 10, 0, 9)) == Decision::Deny);
  CHECK(grant_local(view(10, 10, 1, 9)) == Decision::Grant);
}

TEST_CASE("grant keeps the remaining pool stable") {
  // 10 clients on 7 containers: binding a 5th leaves 5 clients (1.125 erlangs)
  // on 2 servers; a 6th leaves 4 clients (0.9) on 1 server; a 7th leaves 3 on 0.
  CHECK(grant_local(view(10, 7, 3, 4)) == Decision::Grant);
  CHECK(grant_local(view(10, 7, 2, 5)) == Decision::Grant);
  CHECK(grant_local(view(10, 7, 1, 6)) == Decision::Deny);
  // One client per container: always grantable while a container is free.
  for (int k = 0; k < 20; ++k) CHECK(grant_local(view(20, 20, 20 - k, k)) == Decision::Grant);
  // Binding the last client leaves no remote load at all.
  CHECK(grant_local(view(1, 1, 1, 0)) == Decision::Grant);
}

TEST_CASE("grant agrees with the stability frontier") {
  for (int n : {10, 25, 50}) {
    for (int c = stability_bound(n); c <= n + 5; ++c) {
      int frontier = oracle::stability_frontier(n, c);
      int k = 0;
      while (k < std::min(n, c) && grant_local(view(n, c, c - k, k)) == Decision::Grant) ++k;
      CAPTURE(n);
      CAPTURE(c);
      CHECK(k == frontier);
    }
  }
}

TEST_CASE("stability bound") {
  CHECK(stability_bound(10) == 3);
  CHECK(stability_bound(40) == 10);  // 9 erlangs needs strictly more than 9 servers
  for (int n : {1, 7, 50, 200, 400}) {
    int b = stability_bound(n);
    CHECK(b == static_cast<int>(std::floor(n * 0.225)) + 1);
    CHECK(oracle::is_stable(n * kLambda, 1.0 / 3.0, b));
    CHECK_FALSE(oracle::is_stable(n * kLambda, 1.0 / 3.0, b - 1));
  }
}

TEST_CASE("binomial estimate") {
  CHECK(binomial_denial_estimate(10, 0.0, 3) == 0.0);
  CHECK(binomial_denial_estimate(10, 0.3, 10) == 0.0);
  CHECK(binomial_denial_estimate(400, 0.3, 80) == 1.0);  // pool unstable even with no locals
  double prev = 1.0;
  for (int c = stability_bound(50); c <= 60; ++c) {
    double d = binomial_denial_estimate(50, 0.3, c);
    CHECK(d <= prev + 1e-12);
    CHECK(d >= 0.0);
    prev = d;
  }
}

TEST_CASE("provisioning bounds") {
  for (int n : {10, 50, 200}) {
    CHECK(provisioning_lower_bound(n, 0.0, 0.01) == stability_bound(n));
    CHECK(provisioning_lower_bound(n, 0.3, 1.0) == stability_bound(n));
    for (double f : {0.2, 0.3, 0.4}) {
      int lb = provisioning_lower_bound(n, f, 0.01);
      int est = estimated_min_containers(n, f, 0.01);
      CHECK(lb >= stability_bound(n));
      CHECK(est >= lb);
      CHECK(est <= saturation_bound(n));
      // Looser targets never need more containers.
      CHECK(estimated_min_containers(n, f, 0.05) <= est);
    }
  }
  CHECK(saturation_bound(10) == 10 + 3 + 1);
}

TEST_CASE("search with no local demand returns the stability bound") {
  auto r = provision_search(10, 0.0, 300.0, 0.01, quick_options());
  CHECK_FALSE(r.saturated);
  CHECK(r.min_containers == 3);
  CHECK(r.ratio() == doctest::Approx(0.3));
  REQUIRE(r.at_min());
  CHECK(r.at_min()->pass);
}

TEST_CASE("search with a trivial target returns the stability bound") {
  auto r = provision_search(10, 0.3, 300.0, 1.0, quick_options());
  CHECK(r.min_containers == stability_bound(10));
  CHECK(r.lower_bound == stability_bound(10));
}

TEST_CASE("one container per client gives zero denial") {
  auto p = run_admission_probe(10, 0.4, 300.0, 10, 0.01, quick_options());
  REQUIRE(p.aggregate.denial);
  CHECK(p.aggregate.denial->mean == 0.0);
  CHECK(p.pass);
}

TEST_CASE("a capped search reports saturation") {
  auto o = quick_options();
  o.max_containers = 4;
  auto r = provision_search(10, 0.4, 300.0, 0.001, o);
  CHECK(r.saturated);
  CHECK(r.min_containers == 4);
}

TEST_CASE("search arguments are validated") {
  auto o = quick_options();
  CHECK_THROWS_AS(provision_search(10, 1.0, 300.0, 0.01, o), ConfigError);
  CHECK_THROWS_AS(provision_search(10, 0.2, 300.0, 0.0, o), ConfigError);
  CHECK_THROWS_AS(provision_search(10, 0.2, 300.0, 1.5, o), ConfigError);
  CHECK_THROWS_AS(provision_search(0, 0.2, 300.0, 0.01, o), ConfigError);
}
