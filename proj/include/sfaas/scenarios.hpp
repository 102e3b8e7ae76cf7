#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "sfaas/config.hpp"
#include "sfaas/metrics.hpp"
#include "sfaas/oracle.hpp"
#include "sfaas/provisioning.hpp"
#include "sfaas/runner.hpp"

namespace sfaas {

struct RunOptions {
  Execution execution = Execution::Parallel;
  std::ostream* progress = nullptr;  // one line per finished point when set
};

struct Scenario1Point {
  int clients = 0;
  int local = 0;
  oracle::SplitLatency analytic;
  Aggregate simulated;
  std::int64_t bytes = 0;
};

struct Scenario1Minimum {
  int clients = 0;
  int oracle_local = -1;  // -1 when no stable split exists
  double oracle_latency = 0.0;
  int sim_local = -1;
  double sim_latency = 0.0;
};

struct Scenario1Result {
  std::vector<Scenario1Point> points;
  std::vector<Scenario1Minimum> minima;
  bool all_unstable() const;
};

// L values swept for N clients: the configured list, else 0..frontier+1
// (capped at min(N, C)).
std::vector<int> scenario1_sweep(const ScenarioConfig& cfg, int clients);

Scenario1Result run_scenario1(const ScenarioConfig& cfg, const RunOptions& opts = {});

struct Scenario2Result {
  std::vector<ProvisionResult> searches;  // ordered by (N, f)
  bool any_saturated() const;
};

Scenario2Result run_scenario2(const ScenarioConfig& cfg, const RunOptions& opts = {});

struct CustomPoint {
  int clients = 0;
  std::string local_or_f;
  Aggregate simulated;
  std::int64_t bytes = 0;
};

struct CustomResult {
  std::vector<CustomPoint> points;
  // Per replication of the first point, when write_invocations is set.
  std::vector<std::vector<LatencyRecord>> invocations;
  bool all_unstable() const;
};

CustomResult run_custom(const ScenarioConfig& cfg, const RunOptions& opts = {});

// Row builders and file writers. Scenario 1 emits a simulated ("1") and an
// analytical ("1-oracle") row per (N, L).
std::vector<SummaryRow> summary_rows(const ScenarioConfig& cfg, const Scenario1Result& r);
std::vector<SummaryRow> summary_rows(const ScenarioConfig& cfg, const Scenario2Result& r);
std::vector<SummaryRow> summary_rows(const ScenarioConfig& cfg, const CustomResult& r);

void write_minima(std::ostream& out, const Scenario1Result& r);
void write_provisioning(std::ostream& out, const Scenario2Result& r);
void write_oracle_table(std::ostream& out, int clients, int containers, const oracle::Rates& rates);

void write_summary_file(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
void write_invocations_file(const std::filesystem::path& path,
                            const std::vector<std::vector<LatencyRecord>>& reps);

}  // namespace sfaas
