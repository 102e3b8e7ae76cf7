#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sfaas/domain.hpp"

namespace sfaas {

struct LatencyRecord {
  ClientId client = 0;
  SimTime arrival = 0.0;
  SimTime completion = 0.0;
  double service = 0.0;  // the service-time draw
  double waited = 0.0;   // completion - arrival
  Mode preferred = Mode::Remote;
  Mode served = Mode::Remote;
};

enum class Trigger : std::uint8_t { App, Network };
enum class Direction : std::uint8_t { ToLocal, ToRemote };

struct TransitionRecord {
  ClientId client = 0;
  Direction direction = Direction::ToLocal;
  Trigger trigger = Trigger::App;
  SimTime started_at = 0.0;
  SimTime completed_at = 0.0;
  std::uint32_t buffered = 0;  // invocations held at the broker meanwhile
};

struct QueueSample {
  SimTime at = 0.0;
  double length = 0.0;
};

struct ModeStats {
  std::size_t count = 0;
  double mean = 0.0;
  double p99 = 0.0;
};

struct RunSummary {
  std::size_t invocations = 0;  // after warm-up
  double mean_latency = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  ModeStats local;
  ModeStats remote;
  // Fraction of invocations that preferred Local but were served Remote.
  // Only meaningful when a preference process drives transitions.
  std::optional<double> denial_fraction;
  std::int64_t state_transfer_bytes = 0;
  std::vector<double> utilization;  // per container, in [0, 1]
  bool unstable = false;
  std::uint64_t seed = 0;
};

// Nearest-rank percentile (no interpolation) of an unsorted sample; p in (0, 100].
// Reorders `values`.
double nearest_rank(std::vector<double>& values, double p);

// Latency statistics over records whose arrival is strictly after `warmup`.
// Throws EmptyWindow when nothing survives the cut.
RunSummary summarize(std::span<const LatencyRecord> records, SimTime warmup);

struct InstabilityDetector {
  double slope_threshold = 0.01;  // invocations per second
  double final_factor = 10.0;     // final queue must exceed factor * clients
};

// True iff the least-squares slope of queue length over the second half of the
// samples exceeds the threshold and the last sample exceeds factor * clients.
// Fewer than 10 samples never count as unstable.
bool detect_instability(std::span<const QueueSample> samples, int clients,
                        const InstabilityDetector& d = {});

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;
  double lo() const { return mean - half_width; }
  double hi() const { return mean + half_width; }
};

struct Aggregate {
  std::size_t replications = 0;
  bool unstable = false;  // any replication unstable; estimates suppressed
  std::optional<Estimate> mean_latency;
  std::optional<Estimate> p95;
  std::optional<Estimate> p99;
  std::optional<Estimate> local_p99;
  std::optional<Estimate> remote_p99;
  std::optional<Estimate> denial;
  std::optional<Estimate> bytes;
};

// Mean and 95% Student-t interval over replication summaries, reduced in index
// order. Throws ConfigError for fewer than two replications.
Aggregate aggregate(std::span<const RunSummary> runs, double confidence = 0.95);
Estimate t_interval(std::span<const double> values, double confidence = 0.95);

// Shortest round-trip decimal form; identical output for identical doubles.
std::string format_number(double v);

void write_invocations_header(std::ostream& out);
void write_invocations(std::ostream& out, std::size_t replication,
                       std::span<const LatencyRecord> records);

struct SummaryRow {
  std::string scenario;
  int clients = 0;
  int containers = 0;
  std::string local_or_f;
  std::optional<double> mean_s;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
  std::optional<double> p95_s;
  std::optional<double> p99_s;
  std::optional<double> denial;
  std::int64_t bytes = 0;
  bool unstable = false;
};

void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const SummaryRow& row);

}  // namespace sfaas
