#include <doctest.h>

#include "sfaas/errors.hpp"
#include "sfaas/runner.hpp"

using namespace sfaas;

namespace {

PlatformParams small_admission() {
  PlatformParams p;
  p.clients = 20;
  p.containers = 12;
  p.policy = AdmissionOnDemand{};
  p.phase = PhaseProcess(0.3, 60.0);
  p.d_down = 0.3;
  p.d_up = 0.3;
  p.network_trigger_rate = 0.02;
  p.horizon = 4.0e3;
  p.warmup = 4.0e2;
  return p;
}

}  // namespace

TEST_CASE("serial and parallel replications are bit-identical") {
  ReplicationOptions o;
  o.replications = 8;
  o.master_seed = 123;
  o.keep_records = true;
  o.execution = Execution::Serial;
  auto serial = run_replications(small_admission(), o);
  o.execution = Execution::Parallel;
  auto parallel = run_replications(small_admission(), o);

  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    const auto& a = serial[i].result;
    const auto& b = parallel[i].result;
    CHECK(serial[i].index == i);
    CHECK(parallel[i].index == i);
    CHECK(a.summary.seed == b.summary.seed);
    CHECK(a.summary.mean_latency == b.summary.mean_latency);
    CHECK(a.summary.p99 == b.summary.p99);
    CHECK(a.summary.denial_fraction == b.summary.denial_fraction);
    REQUIRE(a.records.size() == b.records.size());
    bool same = true;
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      same &= a.records[k].completion == b.records[k].completion &&
              a.records[k].client == b.records[k].client;
    }
    CHECK(same);
  }
  auto sa = aggregate(summaries(serial));
  auto pa = aggregate(summaries(parallel));
  CHECK(sa.mean_latency->mean == pa.mean_latency->mean);
  CHECK(sa.mean_latency->half_width == pa.mean_latency->half_width);
}

TEST_CASE("replications use distinct seeds") {
  ReplicationOptions o;
  o.replications = 3;
  auto reps = run_replications(small_admission(), o);
  CHECK(reps[0].result.summary.seed != reps[1].result.summary.seed);
  CHECK(reps[0].result.summary.mean_latency != reps[1].result.summary.mean_latency);
  CHECK(reps[0].result.records.empty());
}

TEST_CASE("replication errors propagate") {
  auto p = small_admission();
  p.arrival_rate = 1e-12;  // nothing survives the warm-up cut
  ReplicationOptions o;
  o.replications = 3;
  CHECK_THROWS_AS(run_replications(p, o), EmptyWindow);
  o.replications = 0;
  CHECK_THROWS_AS(run_replications(small_admission(), o), ConfigError);
}

TEST_CASE("worker count") {
  CHECK(parallel_workers() >= 1);
}
