#include <benchmark/benchmark.h>

#include "sfaas/oracle.hpp"
#include "sfaas/runner.hpp"
#include "support/birth_death.hpp"

using namespace sfaas;

namespace {

PlatformParams bench_params() {
  PlatformParams p;
  p.clients = 50;
  p.policy = AdmissionOnDemand{};
  p.phase = PhaseProcess(0.3, 300.0);
  p.horizon = 2.0e4;
  p.warmup = 2.0e3;
  return p;
}

void run(benchmark::State& state, Execution mode) {
  ReplicationOptions o;
  o.replications = static_cast<int>(state.range(0));
  o.execution = mode;
  const auto p = bench_params();
  for (auto _ : state) {
    auto reps = run_replications(p, o);
    benchmark::DoNotOptimize(reps.data());
  }
  state.counters["workers"] = mode == Execution::Parallel ? parallel_workers() : 1;
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ReplicationsSerial(benchmark::State& state) { run(state, Execution::Serial); }
void BM_ReplicationsParallel(benchmark::State& state) { run(state, Execution::Parallel); }

void BM_ErlangCSweep(benchmark::State& state) {
  for (auto _ : state) {
    double acc = 0.0;
    for (int c = 1; c <= 40; ++c) acc += oracle::erlang_c(c, 0.9 * c);
    benchmark::DoNotOptimize(acc);
  }
}

void BM_BirthDeathSweep(benchmark::State& state) {
  for (auto _ : state) {
    double acc = 0.0;
    for (int c = 1; c <= 40; ++c) acc += bd::solve_mmc(0.3 * c, 1.0 / 3.0, c).wait_probability;
    benchmark::DoNotOptimize(acc);
  }
}

}  // namespace

BENCHMARK(BM_ReplicationsSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReplicationsParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ErlangCSweep);
BENCHMARK(BM_BirthDeathSweep);

BENCHMARK_MAIN();
