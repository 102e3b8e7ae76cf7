#include "sfaas/scenarios.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sfaas/errors.hpp"

namespace sfaas {

namespace {

ReplicationOptions replication_options(const ScenarioConfig& cfg, const RunOptions& opts, bool keep) {
  ReplicationOptions r;
  r.replications = cfg.replications;
  r.master_seed = cfg.master_seed;
  r.execution = opts.execution;
  r.keep_records = keep;
  return r;
}

Aggregate aggregate_or_single(const std::vector<RunSummary>& runs) {
  if (runs.size() >= 2) return aggregate(runs);
  // A single replication has no interval; report it with zero width.
  Aggregate a;
  a.replications = runs.size();
  a.unstable = runs.front().unstable;
  if (a.unstable) return a;
  const auto& r = runs.front();
  a.mean_latency = Estimate{r.mean_latency, 0.0};
  a.p95 = Estimate{r.p95, 0.0};
  a.p99 = Estimate{r.p99, 0.0};
  a.bytes = Estimate{static_cast<double>(r.state_transfer_bytes), 0.0};
  if (r.local.count > 0) a.local_p99 = Estimate{r.local.p99, 0.0};
  if (r.remote.count > 0) a.remote_p99 = Estimate{r.remote.p99, 0.0};
  if (r.denial_fraction) a.denial = Estimate{*r.denial_fraction, 0.0};
  return a;
}

std::int64_t mean_bytes(const std::vector<RunSummary>& runs) {
  double sum = 0.0;
  for (const auto& r : runs) sum += static_cast<double>(r.state_transfer_bytes);
  return static_cast<std::int64_t>(sum / static_cast<double>(runs.size()) + 0.5);
}

SummaryRow simulated_row(std::string scenario, int n, int c, std::string local_or_f, const Aggregate& a,
                         std::int64_t bytes) {
  SummaryRow row;
  row.scenario = std::move(scenario);
  row.clients = n;
  row.containers = c;
  row.local_or_f = std::move(local_or_f);
  row.bytes = bytes;
  row.unstable = a.unstable;
  if (a.mean_latency) {
    row.mean_s = a.mean_latency->mean;
    row.ci_lo = a.mean_latency->lo();
    row.ci_hi = a.mean_latency->hi();
  }
  if (a.p95) row.p95_s = a.p95->mean;
  if (a.p99) row.p99_s = a.p99->mean;
  if (a.denial) row.denial = a.denial->mean;
  return row;
}

}  // namespace

bool Scenario1Result::all_unstable() const {
  return !points.empty() &&
         std::all_of(points.begin(), points.end(), [](const Scenario1Point& p) { return p.simulated.unstable; });
}

bool Scenario2Result::any_saturated() const {
  return std::any_of(searches.begin(), searches.end(), [](const ProvisionResult& r) { return r.saturated; });
}

bool CustomResult::all_unstable() const {
  return !points.empty() &&
         std::all_of(points.begin(), points.end(), [](const CustomPoint& p) { return p.simulated.unstable; });
}

std::vector<int> scenario1_sweep(const ScenarioConfig& cfg, int n) {
  const int cap = std::min(n, cfg.containers);
  std::vector<int> out;
  if (!cfg.local_containers.empty()) {
    for (int l : cfg.local_containers) {
      if (l <= cap) out.push_back(l);
    }
    return out;
  }
  const int frontier = oracle::stability_frontier(n, cfg.containers, cfg.rates());
  const int last = std::min(cap, frontier + 1);
  for (int l = 0; l <= last; ++l) out.push_back(l);
  return out;
}

Scenario1Result run_scenario1(const ScenarioConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const auto rates = cfg.rates();
  Scenario1Result res;
  for (int n : cfg.client_set()) {
    Scenario1Minimum m;
    m.clients = n;
    m.oracle_local = oracle::scenario1_optimal_split(n, cfg.containers, rates);
    if (m.oracle_local >= 0) {
      m.oracle_latency = oracle::scenario1_latency(n, m.oracle_local, cfg.containers, rates).average.seconds();
    }
    for (int l : scenario1_sweep(cfg, n)) {
      PlatformParams params = cfg.platform_params(n);
      params.policy = StaticSplit{l};
      const auto runs = summaries(run_replications(params, replication_options(cfg, opts, false)));
      Scenario1Point p;
      p.clients = n;
      p.local = l;
      p.analytic = oracle::scenario1_latency(n, l, cfg.containers, rates);
      p.simulated = aggregate_or_single(runs);
      p.bytes = mean_bytes(runs);
      if (p.simulated.mean_latency && (m.sim_local < 0 || p.simulated.mean_latency->mean < m.sim_latency)) {
        m.sim_local = l;
        m.sim_latency = p.simulated.mean_latency->mean;
      }
      if (opts.progress) {
        *opts.progress << "scenario1 N=" << n << " L=" << l << " sim="
                       << (p.simulated.mean_latency ? format_number(p.simulated.mean_latency->mean) : "unstable")
                       << " oracle=" << format_number(p.analytic.average.seconds()) << '\n';
      }
      res.points.push_back(std::move(p));
    }
    res.minima.push_back(m);
  }
  return res;
}

Scenario2Result run_scenario2(const ScenarioConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  Scenario2Result res;
  for (int n : cfg.client_set()) {
    for (double f : cfg.f_set()) {
      ProvisionOptions po;
      po.base = cfg.platform_params(n);
      po.replication = replication_options(cfg, opts, false);
      po.max_containers = cfg.search_max_containers;
      res.searches.push_back(provision_search(n, f, cfg.mean_local_duration_s, cfg.target_denial, po));
      if (opts.progress) {
        const auto& s = res.searches.back();
        *opts.progress << "scenario2 N=" << n << " f=" << format_number(f) << " C_min=" << s.min_containers
                       << (s.saturated ? " (saturated)" : "") << " ratio=" << format_number(s.ratio()) << '\n';
      }
    }
  }
  return res;
}

CustomResult run_custom(const ScenarioConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  CustomResult res;
  for (int n : cfg.client_set()) {
    std::vector<std::pair<PlatformParams, std::string>> points;
    PlatformParams params = cfg.platform_params(n);
    if (cfg.policy == PolicyKind::StaticSplit) {
      const std::vector<int> ls = cfg.local_containers.empty() ? std::vector<int>{0} : cfg.local_containers;
      for (int l : ls) {
        params.policy = StaticSplit{l};
        points.emplace_back(params, std::to_string(l));
      }
    } else {
      for (double f : cfg.f_set()) {
        params.policy = AdmissionOnDemand{};
        params.phase = PhaseProcess(f, cfg.mean_local_duration_s);
        points.emplace_back(params, format_number(f));
      }
    }
    for (auto& [p, label] : points) {
      const bool keep = cfg.write_invocations && res.invocations.empty();
      auto reps = run_replications(p, replication_options(cfg, opts, keep));
      const auto runs = summaries(reps);
      if (keep) {
        for (auto& r : reps) res.invocations.push_back(std::move(r.result.records));
      }
      res.points.push_back(CustomPoint{n, label, aggregate_or_single(runs), mean_bytes(runs)});
      if (opts.progress) {
        const auto& a = res.points.back().simulated;
        *opts.progress << "simulate N=" << n << " " << label << " mean="
                       << (a.mean_latency ? format_number(a.mean_latency->mean) : "unstable") << '\n';
      }
    }
  }
  return res;
}

std::vector<SummaryRow> summary_rows(const ScenarioConfig& cfg, const Scenario1Result& r) {
  std::vector<SummaryRow> rows;
  for (const auto& p : r.points) {
    rows.push_back(simulated_row("1", p.clients, cfg.containers, std::to_string(p.local), p.simulated, p.bytes));
    SummaryRow o;
    o.scenario = "1-oracle";
    o.clients = p.clients;
    o.containers = cfg.containers;
    o.local_or_f = std::to_string(p.local);
    o.bytes = static_cast<std::int64_t>(p.local) * cfg.state_size_bytes;
    o.unstable = !p.analytic.average.is_stable();
    if (!o.unstable) {
      o.mean_s = p.analytic.average.seconds();
      o.ci_lo = o.mean_s;
      o.ci_hi = o.mean_s;
    }
    rows.push_back(o);
  }
  return rows;
}

std::vector<SummaryRow> summary_rows(const ScenarioConfig& cfg, const Scenario2Result& r) {
  std::vector<SummaryRow> rows;
  for (const auto& s : r.searches) {
    const Probe* p = s.at_min();
    Aggregate a;
    if (p) a = p->aggregate;
    auto row = simulated_row("2", s.clients, s.min_containers, format_number(s.f_local), a,
                             a.bytes ? static_cast<std::int64_t>(a.bytes->mean + 0.5) : 0);
    if (!p) row.unstable = s.saturated;
    rows.push_back(row);
  }
  (void)cfg;
  return rows;
}

std::vector<SummaryRow> summary_rows(const ScenarioConfig& cfg, const CustomResult& r) {
  std::vector<SummaryRow> rows;
  for (const auto& p : r.points) {
    rows.push_back(simulated_row("custom", p.clients, cfg.containers, p.local_or_f, p.simulated, p.bytes));
  }
  return rows;
}

void write_minima(std::ostream& out, const Scenario1Result& r) {
  out << "N,source,L_star,W_s\n";
  for (const auto& m : r.minima) {
    out << m.clients << ",oracle," << m.oracle_local << ','
        << (m.oracle_local >= 0 ? format_number(m.oracle_latency) : std::string()) << '\n';
    out << m.clients << ",sim," << m.sim_local << ','
        << (m.sim_local >= 0 ? format_number(m.sim_latency) : std::string()) << '\n';
  }
}

void write_provisioning(std::ostream& out, const Scenario2Result& r) {
  out << "N,f,C_min,ratio,denial_mean,denial_ci_lo,denial_ci_hi,lower_bound,probes,saturated\n";
  for (const auto& s : r.searches) {
    const Probe* p = s.at_min();
    std::string mean, lo, hi;
    if (p && p->aggregate.denial) {
      mean = format_number(p->aggregate.denial->mean);
      lo = format_number(std::max(0.0, p->aggregate.denial->lo()));
      hi = format_number(p->denial_upper);
    }
    out << s.clients << ',' << format_number(s.f_local) << ',' << s.min_containers << ','
        << format_number(s.ratio()) << ',' << mean << ',' << lo << ',' << hi << ',' << s.lower_bound << ','
        << s.probes.size() << ',' << (s.saturated ? 1 : 0) << '\n';
  }
}

void write_oracle_table(std::ostream& out, int clients, int containers, const oracle::Rates& rates) {
  out << "N,L,W_local,W_remote,W_avg,stable\n";
  auto cell = [](bool present, const oracle::Response& r) {
    return present ? format_number(r.seconds()) : std::string();
  };
  for (const auto& row : oracle::scenario1_table(clients, containers, rates)) {
    out << row.clients << ',' << row.local << ',' << cell(row.local > 0, row.local_response) << ','
        << cell(row.local < row.clients, row.remote_response) << ',' << format_number(row.average.seconds())
        << ',' << (row.average.is_stable() ? 1 : 0) << '\n';
  }
}

void write_summary_file(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_summary_header(out);
  for (const auto& r : rows) write_summary_row(out, r);
}

void write_invocations_file(const std::filesystem::path& path,
                            const std::vector<std::vector<LatencyRecord>>& reps) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_invocations_header(out);
  for (std::size_t i = 0; i < reps.size(); ++i) write_invocations(out, i, reps[i]);
}

}  // namespace sfaas
