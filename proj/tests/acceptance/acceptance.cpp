// Acceptance suite: one PASS/FAIL line per criterion, detail lines indented.
// Usage: acceptance [A1 A2 ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sfaas/metrics.hpp"
#include "sfaas/oracle.hpp"
#include "sfaas/platform.hpp"
#include "sfaas/policies.hpp"
#include "sfaas/provisioning.hpp"
#include "sfaas/runner.hpp"
#include "support/birth_death.hpp"

using namespace sfaas;

namespace {

constexpr double kLambda = 4.5 / 60.0;
constexpr double kMuRemote = 1.0 / 3.0;

class Log {
 public:
  void detail(const std::string& s) { std::cout << "  " << s << '\n' << std::flush; }
  void check(bool ok, const std::string& what) {
    if (!ok) {
      failed_ = true;
      detail("violated: " + what);
    }
  }
  bool failed() const { return failed_; }

 private:
  bool failed_ = false;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <class... T>
std::string cat(const T&... parts) {
  std::ostringstream o;
  (o << ... << parts);
  return o.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void a1(Log& log) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int c = 1; c <= 40; ++c) {
    for (double a : {0.1, 0.5 * c, 0.9 * c, 0.99 * c}) {
      const auto ref = bd::solve_mmc(a * kMuRemote, kMuRemote, c);
      const double got = oracle::erlang_c(c, a);
      const double err = std::abs(got - ref.wait_probability);
      worst = std::max(worst, err);
      if (err > 1e-9) log.check(false, cat("erlang_c(", c, ", ", a, ") = ", got, " vs ", ref.wait_probability));
    }
  }
  log.check(std::abs(oracle::erlang_c(1, 0.5) - 0.5) <= 1e-12, "erlang_c(1, 0.5) = 0.5");
  log.check(std::abs(oracle::erlang_c(2, 1.0) - 1.0 / 3.0) <= 1e-12, "erlang_c(2, 1) = 1/3");
  const double took = seconds_since(t0);
  log.detail(cat("160 (c, a) pairs, worst |diff| = ", worst, ", ", fmt("%.3f s", took)));
  log.check(took < 10.0, "runtime < 10 s");
}

void a2(Log& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::pair<int, int> points[] = {{50, 10}, {70, 10}, {90, 5}, {110, 5}};
  for (auto [n, l] : points) {
    PlatformParams p;
    p.clients = n;
    p.policy = StaticSplit{l};
    ReplicationOptions o;
    o.replications = 20;
    o.master_seed = 2024;
    const auto agg = aggregate(summaries(run_replications(p, o)));
    const double w = oracle::scenario1_latency(n, l).average.seconds();
    if (agg.unstable || !agg.mean_latency) {
      log.check(false, cat("(", n, ",", l, ") flagged unstable"));
      continue;
    }
    const auto& m = *agg.mean_latency;
    const double rel = std::abs(m.mean - w) / w;
    log.detail(cat("N=", n, " L=", l, " oracle ", fmt("%.4f", w), " sim ", fmt("%.4f", m.mean), " CI [",
                   fmt("%.4f", m.lo()), ", ", fmt("%.4f", m.hi()), "] rel ", fmt("%.4f", rel)));
    log.check(rel <= 0.05, cat("(", n, ",", l, ") within 5%"));
    log.check(m.lo() <= w && w <= m.hi(), cat("(", n, ",", l, ") oracle inside 95% CI"));
  }
  const double took = seconds_since(t0);
  log.detail(fmt("%.1f s", took));
  log.check(took < 300.0, "runtime < 5 min");
}

void a3(Log& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const int ns[] = {50, 70, 90, 110};
  std::vector<std::vector<oracle::SplitLatency>> tables;
  double range50 = 0.0, range110 = 0.0;
  for (int n : ns) {
    auto t = oracle::scenario1_table(n);
    const int frontier = oracle::stability_frontier(n);
    const int best = oracle::scenario1_optimal_split(n);
    double lo = INFINITY, hi = 0.0;
    for (int l = 0; l <= frontier; ++l) {
      lo = std::min(lo, t[l].average.seconds());
      hi = std::max(hi, t[l].average.seconds());
    }
    log.detail(cat("N=", n, " argmin L=", best, " W=", fmt("%.4f", t[best].average.seconds()), " frontier ",
                   frontier, " range ", fmt("%.4f", hi - lo)));
    log.check(best > 0 && best < frontier, cat("N=", n, " interior argmin"));
    log.check(frontier + 1 < static_cast<int>(t.size()) && !t[frontier + 1].average.is_stable(),
              cat("N=", n, " diverges past the frontier"));
    // Divergence: the last stable point dominates the curve.
    log.check(t[frontier].average.seconds() >= hi, cat("N=", n, " maximum at the frontier"));
    if (n == 50) range50 = hi - lo;
    if (n == 110) range110 = hi - lo;
    tables.push_back(std::move(t));
  }
  log.check(oracle::stability_frontier(50) == 37, "frontier(50) = 37");
  log.check(oracle::stability_frontier(110) == 19, "frontier(110) = 19");
  for (std::size_t i = 1; i < tables.size(); ++i) {
    for (std::size_t l = 0; l < tables[i].size(); ++l) {
      if (!tables[i][l].average.is_stable()) break;
      if (!(tables[i][l].average.seconds() > tables[i - 1][l].average.seconds())) {
        log.check(false, cat("ordering in N at L=", l));
      }
    }
  }
  log.detail(cat("max stable W - min W: N=50 ", fmt("%.4f", range50), ", N=110 ", fmt("%.4f", range110)));
  log.check(range110 > range50, "range(110) > range(50)");
  const double took = seconds_since(t0);
  log.detail(fmt("%.4f s", took));
  log.check(took < 1.0, "runtime < 1 s");
}

ProvisionOptions provisioning_options() {
  ProvisionOptions o;
  o.replication.replications = 20;
  o.replication.master_seed = 7;
  return o;
}

void a4(Log& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const double tl = 300.0;
  const double target = 0.01;
  auto opts = provisioning_options();

  for (int n : {10, 50}) {
    auto p = run_admission_probe(n, 0.4, tl, n, target, opts);
    const double d = p.aggregate.denial ? p.aggregate.denial->mean : -1.0;
    log.detail(cat("C=N=", n, " f=0.4 denial ", d));
    log.check(d == 0.0, cat("zero denial with C=N=", n));
  }
  for (int n : {10, 50}) {
    auto r = provision_search(n, 0.0, tl, target, opts);
    const int expect = static_cast<int>(std::floor(0.225 * n)) + 1;
    log.detail(cat("f=0 N=", n, " C_min ", r.min_containers, " expected ", expect));
    log.check(r.min_containers == expect && !r.saturated, cat("f=0 bound for N=", n));
  }
  {
    auto r = provision_search(10, 0.2, tl, target, opts);
    log.detail(cat("C_min(10, 0.2) = ", r.min_containers, " (reference 7)"));
    log.check(r.min_containers >= 5 && r.min_containers <= 9 && !r.saturated, "C_min(10, 0.2) in [5, 9]");
  }

  const double fs[] = {0.2, 0.3, 0.4};
  const double reference[] = {0.47, 0.55, 0.64};
  double r200[3], r400[3];
  for (int n : {200, 400}) {
    for (int i = 0; i < 3; ++i) {
      auto r = provision_search(n, fs[i], tl, target, opts);
      const auto* at = r.at_min();
      log.detail(cat("N=", n, " f=", fs[i], " C_min ", r.min_containers, " ratio ", fmt("%.4f", r.ratio()),
                     " denial ", at && at->aggregate.denial ? at->aggregate.denial->mean : -1.0, " probes ",
                     r.probes.size(), fmt(" (%.0f s)", seconds_since(t0))));
      log.check(!r.saturated, cat("N=", n, " f=", fs[i], " not saturated"));
      (n == 200 ? r200 : r400)[i] = r.ratio();
    }
  }
  log.check(r200[0] < r200[1] && r200[1] < r200[2], "C_min/N increases with f at N=200");
  log.check(r400[0] < r400[1] && r400[1] < r400[2], "C_min/N increases with f at N=400");
  for (int i = 0; i < 3; ++i) {
    const double delta = std::abs(r400[i] - r200[i]);
    log.detail(cat("f=", fs[i], " |ratio(400) - ratio(200)| = ", fmt("%.4f", delta), ", ratio(400) - reference ",
                   reference[i], " = ", fmt("%+.4f", r400[i] - reference[i])));
    log.check(delta < 0.05, cat("convergence at f=", fs[i]));
    log.check(r400[i] >= 0.38 && r400[i] <= 0.80, cat("converged ratio in [0.38, 0.80] at f=", fs[i]));
  }
  const double took = seconds_since(t0);
  log.detail(fmt("%.1f s", took));
  log.check(took < 1200.0, "runtime < 20 min");
}

PlatformParams soak_params() {
  PlatformParams p;
  p.clients = 30;
  p.containers = 20;
  p.policy = AdmissionOnDemand{};
  p.phase = PhaseProcess(0.4, 30.0);
  p.d_down = 0.4;
  p.d_up = 0.6;
  p.network_trigger_rate = 0.2;
  p.horizon = 3.0e4;
  p.warmup = 1.0e3;
  p.drain = true;
  p.check_invariants = true;
  return p;
}

std::string trace_csv(const RunResult& r) {
  std::ostringstream out;
  write_invocations_header(out);
  write_invocations(out, 0, r.records);
  return out.str();
}

void a5(Log& log) {
  const auto p = soak_params();
  const auto a = Platform(p, 11).run();
  const auto& c = a.counters;
  std::size_t app = 0, net = 0;
  for (const auto& t : a.transitions) (t.trigger == Trigger::App ? app : net) += 1;
  log.detail(cat("transitions ", a.transitions.size(), " (app ", app, ", network ", net, "), invocations ",
                 c.generated, ", completed ", c.completed, ", left ", a.in_system_at_end));
  log.detail(cat("misroutes ", c.misroutes, ", conservation ", c.conservation_violations, ", invariants ",
                 c.invariant_violations, ", version ", c.version_violations));
  log.check(a.transitions.size() >= 10'000, ">= 1e4 transitions");
  log.check(app > 0 && net > 0, "mixed triggers");
  log.check(c.generated == c.completed && a.in_system_at_end == 0 && c.misroutes == 0, "zero lost invocations");
  log.check(c.generated == a.records.size(), "one record per invocation");
  log.check(c.invariant_violations == 0 && c.conservation_violations == 0, "container conservation");
  log.check(c.version_violations == 0, "state-version safety");
  const auto b = Platform(p, 11).run();
  log.check(trace_csv(a) == trace_csv(b), "identical invocations.csv for the same seed");
}

void a6(Log& log) {
  PlatformParams p;
  p.clients = 40;
  p.containers = 40;
  p.policy = AdmissionOnDemand{};
  p.phase = PhaseProcess(0.3, 300.0);
  ReplicationOptions o;
  o.replications = 20;
  o.master_seed = 3;
  const auto agg = aggregate(summaries(run_replications(p, o)));
  if (!agg.local_p99 || !agg.remote_p99) {
    log.check(false, "both modes observed");
    return;
  }
  log.detail(cat("p99 local ", fmt("%.3f", agg.local_p99->mean), " [", fmt("%.3f", agg.local_p99->lo()), ", ",
                 fmt("%.3f", agg.local_p99->hi()), "], remote ", fmt("%.3f", agg.remote_p99->mean), " [",
                 fmt("%.3f", agg.remote_p99->lo()), ", ", fmt("%.3f", agg.remote_p99->hi()), "]"));
  log.check(agg.local_p99->mean < agg.remote_p99->mean, "local p99 < remote p99");
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<void(Log&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"A1", "Erlang C matches a brute-force birth-death solve", a1},
      {"A2", "simulated static split matches the analytical latency", a2},
      {"A3", "latency-vs-split curve shape", a3},
      {"A4", "denial and provisioning trends", a4},
      {"A5", "transition protocol invariants under a randomized soak", a5},
      {"A6", "local tail latency below remote tail latency", a6},
  };
  std::set<std::string> wanted(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    std::cout << c.id << " running: " << c.title << '\n' << std::flush;
    Log log;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(log);
    } catch (const std::exception& e) {
      log.check(false, std::string("exception: ") + e.what());
    }
    std::cout << c.id << ' ' << (log.failed() ? "FAIL" : "PASS") << "  " << c.title
              << fmt("  (%.1f s)", seconds_since(t0)) << '\n'
              << std::flush;
    failures += log.failed();
  }
  return failures == 0 ? 0 : 1;
}
