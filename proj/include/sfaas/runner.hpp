#pragma once

#include <cstdint>
#include <vector>

#include "sfaas/metrics.hpp"
#include "sfaas/platform.hpp"

namespace sfaas {

enum class Execution : std::uint8_t {
  Serial,    // reference: replications one after another
  Parallel,  // OpenMP team over replication indices (serial if built without OpenMP)
};

struct ReplicationOptions {
  int replications = 20;
  std::uint64_t master_seed = 1;
  Execution execution = Execution::Parallel;
  bool keep_records = false;  // retain per-invocation records (for invocations.csv)
};

struct Replication {
  std::size_t index = 0;
  RunResult result;
};

// Runs independent replications of one configuration. Replication i always
// uses replication_seed(master_seed, i), so results are identical under either
// execution mode. Exceptions from any replication are rethrown after all
// finish, lowest index first.
std::vector<Replication> run_replications(const PlatformParams& params, const ReplicationOptions& opts);

std::vector<RunSummary> summaries(const std::vector<Replication>& reps);

// Worker threads available to Execution::Parallel.
int parallel_workers();

}  // namespace sfaas
