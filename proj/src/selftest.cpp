#include <cmath>
#include <sstream>
#include <string>

#include "sfaas/cli.hpp"
#include "sfaas/oracle.hpp"
#include "sfaas/platform.hpp"

namespace sfaas {

namespace {

PlatformParams soak_params() {
  PlatformParams p;
  p.clients = 12;
  p.containers = 8;
  p.policy = AdmissionOnDemand{};
  p.phase = PhaseProcess(0.4, 20.0);
  p.network_trigger_rate = 0.05;
  p.d_down = 0.3;
  p.d_up = 0.4;
  p.horizon = 3000.0;
  p.warmup = 0.0;
  p.drain = true;
  p.check_invariants = true;
  return p;
}

std::string trace(const RunResult& r) {
  std::ostringstream s;
  write_invocations(s, 0, r.records);
  return s.str();
}

}  // namespace

int run_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    out << (ok ? "PASS " : "FAIL ") << what << '\n';
    if (!ok) ++failures;
  };

  check(std::abs(oracle::erlang_c(1, 0.5) - 0.5) < 1e-12, "erlang_c(1, 0.5) = 0.5");
  check(std::abs(oracle::erlang_c(2, 1.0) - 1.0 / 3.0) < 1e-12, "erlang_c(2, 1) = 1/3");
  check(std::abs(oracle::mmc_response(0.075, 1.0, 1).seconds() - oracle::mm1_response(0.075, 1.0).seconds()) < 1e-12,
        "M/M/c with c=1 is M/M/1");
  check(oracle::stability_frontier(50) == 37 && oracle::stability_frontier(110) == 19,
        "stability frontier N=50 -> 37, N=110 -> 19");

  Platform a(soak_params(), 7);
  const auto ra = a.run();
  Platform b(soak_params(), 7);
  const auto rb = b.run();
  const auto& c = ra.counters;
  check(c.generated == c.completed && ra.in_system_at_end == 0, "no lost invocations after drain");
  check(c.invariant_violations == 0 && c.conservation_violations == 0, "container and invocation conservation");
  check(c.version_violations == 0, "state-version safety");
  check(c.misroutes == 0, "no misroutes");
  check(c.to_local + c.to_remote > 100, "soak exercised transitions");
  check(trace(ra) == trace(rb), "same seed gives identical invocation trace");

  out << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? kExitOk : kExitRuntime;
}

}  // namespace sfaas
