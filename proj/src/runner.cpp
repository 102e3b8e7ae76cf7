#include "sfaas/runner.hpp"

#include <exception>

#ifdef SFAAS_HAVE_OPENMP
#include <omp.h>
#endif

#include "sfaas/errors.hpp"

namespace sfaas {

namespace {

Replication run_one(const PlatformParams& params, const ReplicationOptions& opts, std::size_t i) {
  Platform platform(params, replication_seed(opts.master_seed, i));
  Replication rep{i, platform.run()};
  if (!opts.keep_records) {
    rep.result.records.clear();
    rep.result.records.shrink_to_fit();
  }
  return rep;
}

}  // namespace

std::vector<Replication> run_replications(const PlatformParams& params, const ReplicationOptions& opts) {
  if (opts.replications < 1) throw ConfigError("replications must be >= 1");
  params.validate();
  const auto n = static_cast<std::size_t>(opts.replications);
  std::vector<Replication> out(n);
  std::vector<std::exception_ptr> errors(n);

  if (opts.execution == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        out[i] = run_one(params, opts, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      try {
        out[idx] = run_one(params, opts, idx);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  }

  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<RunSummary> summaries(const std::vector<Replication>& reps) {
  std::vector<RunSummary> out;
  out.reserve(reps.size());
  for (const auto& r : reps) out.push_back(r.result.summary);
  return out;
}

int parallel_workers() {
#ifdef SFAAS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sfaas
