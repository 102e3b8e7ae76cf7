#include "sfaas/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "sfaas/errors.hpp"

namespace sfaas {

double nearest_rank(std::vector<double>& values, double p) {
  if (values.empty()) throw EmptyWindow("percentile of an empty sample");
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

namespace {

ModeStats mode_stats(std::vector<double>& waited) {
  ModeStats s;
  s.count = waited.size();
  if (waited.empty()) return s;
  double sum = 0.0;
  for (double w : waited) sum += w;
  s.mean = sum / static_cast<double>(waited.size());
  s.p99 = nearest_rank(waited, 99.0);
  return s;
}

}  // namespace

RunSummary summarize(std::span<const LatencyRecord> records, SimTime warmup) {
  std::vector<double> all;
  std::vector<double> local;
  std::vector<double> remote;
  all.reserve(records.size());
  std::size_t wanted_local = 0;
  std::size_t denied = 0;
  for (const auto& r : records) {
    if (!(r.arrival > warmup)) continue;
    all.push_back(r.waited);
    (r.served == Mode::Local ? local : remote).push_back(r.waited);
    if (r.preferred == Mode::Local) {
      ++wanted_local;
      if (r.served == Mode::Remote) ++denied;
    }
  }
  if (all.empty()) throw EmptyWindow("no invocations arrived after the warm-up period");

  RunSummary s;
  s.invocations = all.size();
  double sum = 0.0;
  for (double w : all) sum += w;
  s.mean_latency = sum / static_cast<double>(all.size());
  s.p95 = nearest_rank(all, 95.0);
  s.p99 = nearest_rank(all, 99.0);
  s.local = mode_stats(local);
  s.remote = mode_stats(remote);
  if (wanted_local > 0) {
    s.denial_fraction = static_cast<double>(denied) / static_cast<double>(wanted_local);
  }
  return s;
}

bool detect_instability(std::span<const QueueSample> samples, int clients,
                        const InstabilityDetector& d) {
  if (samples.size() < 10) return false;
  const auto tail = samples.subspan(samples.size() / 2);
  const double n = static_cast<double>(tail.size());
  double mt = 0.0;
  double mq = 0.0;
  for (const auto& s : tail) {
    mt += s.at;
    mq += s.length;
  }
  mt /= n;
  mq /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& s : tail) {
    sxy += (s.at - mt) * (s.length - mq);
    sxx += (s.at - mt) * (s.at - mt);
  }
  if (sxx <= 0.0) return false;
  const double slope = sxy / sxx;
  return slope > d.slope_threshold && samples.back().length > d.final_factor * clients;
}

Estimate t_interval(std::span<const double> values, double confidence) {
  if (values.size() < 2) throw ConfigError("a confidence interval needs at least two replications");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(dist, 0.5 + confidence / 2.0);
  return {mean, t * sd / std::sqrt(n)};
}

Aggregate aggregate(std::span<const RunSummary> runs, double confidence) {
  if (runs.size() < 2) throw ConfigError("aggregation needs at least two replications");
  Aggregate a;
  a.replications = runs.size();
  a.unstable = std::any_of(runs.begin(), runs.end(), [](const RunSummary& r) { return r.unstable; });
  if (a.unstable) return a;

  auto collect = [&](auto field) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const auto& r : runs) v.push_back(field(r));
    return t_interval(v, confidence);
  };
  a.mean_latency = collect([](const RunSummary& r) { return r.mean_latency; });
  a.p95 = collect([](const RunSummary& r) { return r.p95; });
  a.p99 = collect([](const RunSummary& r) { return r.p99; });
  a.bytes = collect([](const RunSummary& r) { return static_cast<double>(r.state_transfer_bytes); });
  const bool all_local = std::all_of(runs.begin(), runs.end(), [](const RunSummary& r) { return r.local.count > 0; });
  const bool all_remote = std::all_of(runs.begin(), runs.end(), [](const RunSummary& r) { return r.remote.count > 0; });
  if (all_local) a.local_p99 = collect([](const RunSummary& r) { return r.local.p99; });
  if (all_remote) a.remote_p99 = collect([](const RunSummary& r) { return r.remote.p99; });
  const bool denial = std::any_of(runs.begin(), runs.end(), [](const RunSummary& r) { return r.denial_fraction.has_value(); });
  if (denial) a.denial = collect([](const RunSummary& r) { return r.denial_fraction.value_or(0.0); });
  return a;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void write_invocations_header(std::ostream& out) {
  out << "replication,client,arrival_s,completion_s,preferred,served,waited_s\n";
}

void write_invocations(std::ostream& out, std::size_t replication,
                       std::span<const LatencyRecord> records) {
  for (const auto& r : records) {
    out << replication << ',' << r.client << ',' << format_number(r.arrival) << ','
        << format_number(r.completion) << ',' << to_string(r.preferred) << ','
        << to_string(r.served) << ',' << format_number(r.waited) << '\n';
  }
}

void write_summary_header(std::ostream& out) {
  out << "scenario,N,C,L_or_f,mean_s,ci_lo,ci_hi,p95_s,p99_s,denial,bytes,unstable\n";
}

void write_summary_row(std::ostream& out, const SummaryRow& row) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  out << row.scenario << ',' << row.clients << ',' << row.containers << ',' << row.local_or_f << ','
      << opt(row.mean_s) << ',' << opt(row.ci_lo) << ',' << opt(row.ci_hi) << ','
      << opt(row.p95_s) << ',' << opt(row.p99_s) << ',' << opt(row.denial) << ',' << row.bytes
      << ',' << (row.unstable ? 1 : 0) << '\n';
}

}  // namespace sfaas
