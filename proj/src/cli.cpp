#include "sfaas/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfaas/config.hpp"
#include "sfaas/errors.hpp"
#include "sfaas/scenarios.hpp"

namespace sfaas {

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> replications;
  std::optional<double> horizon;
  std::vector<int> clients;
  std::optional<int> containers;
  bool serial = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON scenario config");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--replications", f.replications, "replications per point");
  cmd->add_option("--horizon", f.horizon, "simulated seconds per replication");
  cmd->add_option("--clients", f.clients, "client counts (repeatable)");
  cmd->add_option("--containers", f.containers, "provisioned containers");
  cmd->add_flag("--serial", f.serial, "run replications serially");
  cmd->add_flag("--quiet", f.quiet, "no progress lines");
}

ScenarioConfig resolve(const CommonFlags& f, ScenarioKind kind) {
  ScenarioConfig cfg = f.config_path.empty() ? ScenarioConfig{} : load_config(f.config_path);
  if (f.config_path.empty() || kind != ScenarioKind::Custom) cfg.scenario = kind;
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.out_dir) cfg.output_dir = *f.out_dir;
  if (f.replications) cfg.replications = *f.replications;
  if (f.horizon) cfg.horizon_s = *f.horizon;
  if (!f.clients.empty()) cfg.clients = f.clients;
  if (f.containers) cfg.containers = *f.containers;
  return cfg;
}

RunOptions run_options(const CommonFlags& f, std::ostream& err) {
  RunOptions o;
  o.execution = f.serial ? Execution::Serial : Execution::Parallel;
  o.progress = f.quiet ? nullptr : &err;
  return o;
}

void print_rows(std::ostream& out, const std::vector<SummaryRow>& rows) {
  write_summary_header(out);
  for (const auto& r : rows) write_summary_row(out, r);
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stateful FaaS edge simulator and queueing oracle", "sfaas"};
  app.require_subcommand(1);

  CommonFlags s1_flags;
  std::vector<int> s1_local;
  auto* s1 = app.add_subcommand("scenario1", "fixed pool: latency vs number of local containers");
  add_common(s1, s1_flags);
  s1->add_option("--local", s1_local, "local container counts to sweep (repeatable)");

  CommonFlags s2_flags;
  std::vector<double> s2_f;
  std::optional<double> s2_duration;
  std::optional<double> s2_target;
  std::optional<int> s2_max;
  auto* s2 = app.add_subcommand("scenario2", "provisioning search under application-triggered transitions");
  add_common(s2, s2_flags);
  s2->add_option("--f-local", s2_f, "fractions of time preferring local state (repeatable)");
  s2->add_option("--mean-local-duration", s2_duration, "mean local-preference sojourn, seconds");
  s2->add_option("--target-denial", s2_target, "per-invocation denial target");
  s2->add_option("--max-containers", s2_max, "search ceiling");

  CommonFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "simulate a custom configuration");
  add_common(sim, sim_flags);

  bool oracle_s1 = false;
  std::vector<int> oracle_clients;
  int oracle_containers = 40;
  double oracle_rate = 4.5;
  auto* orc = app.add_subcommand("oracle", "analytical scenario-1 tables (CSV on stdout)");
  orc->add_flag("--scenario1", oracle_s1, "scenario-1 latency table (default)");
  orc->add_option("--clients", oracle_clients, "client counts (repeatable)");
  orc->add_option("--containers", oracle_containers, "provisioned containers");
  orc->add_option("--arrival-rate-per-min", oracle_rate, "per-client invocations per minute");

  auto* self = app.add_subcommand("selftest", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*s1) {
      auto cfg = resolve(s1_flags, ScenarioKind::One);
      if (!s1_local.empty()) cfg.local_containers = s1_local;
      const auto res = run_scenario1(cfg, run_options(s1_flags, err));
      const auto rows = summary_rows(cfg, res);
      const std::filesystem::path dir(cfg.output_dir);
      write_summary_file(dir / "summary.csv", rows);
      std::filesystem::create_directories(dir);
      std::ofstream minima(dir / "minima.csv");
      write_minima(minima, res);
      print_rows(out, rows);
      return res.all_unstable() ? kExitSaturated : kExitOk;
    }
    if (*s2) {
      auto cfg = resolve(s2_flags, ScenarioKind::Two);
      if (!s2_f.empty()) cfg.f_local = s2_f;
      if (s2_duration) cfg.mean_local_duration_s = *s2_duration;
      if (s2_target) cfg.target_denial = *s2_target;
      if (s2_max) cfg.search_max_containers = *s2_max;
      const auto res = run_scenario2(cfg, run_options(s2_flags, err));
      const auto rows = summary_rows(cfg, res);
      const std::filesystem::path dir(cfg.output_dir);
      write_summary_file(dir / "summary.csv", rows);
      std::ofstream prov(dir / "provisioning.csv");
      write_provisioning(prov, res);
      print_rows(out, rows);
      return res.any_saturated() ? kExitSaturated : kExitOk;
    }
    if (*sim) {
      auto cfg = resolve(sim_flags, ScenarioKind::Custom);
      const auto res = run_custom(cfg, run_options(sim_flags, err));
      const auto rows = summary_rows(cfg, res);
      const std::filesystem::path dir(cfg.output_dir);
      write_summary_file(dir / "summary.csv", rows);
      if (cfg.write_invocations) write_invocations_file(dir / "invocations.csv", res.invocations);
      print_rows(out, rows);
      return res.all_unstable() ? kExitSaturated : kExitOk;
    }
    if (*orc) {
      (void)oracle_s1;
      if (oracle_clients.empty()) oracle_clients = {50, 70, 90, 110};
      if (oracle_containers < 0) throw ConfigError("--containers must be >= 0");
      if (!(oracle_rate > 0.0)) throw ConfigError("--arrival-rate-per-min must be positive");
      oracle::Rates rates;
      rates.arrival_per_client = oracle_rate / 60.0;
      bool first = true;
      for (int n : oracle_clients) {
        if (n < 1) throw ConfigError("--clients must be >= 1");
        std::ostringstream table;
        write_oracle_table(table, n, oracle_containers, rates);
        auto text = table.str();
        if (!first) text.erase(0, text.find('\n') + 1);  // one header for all tables
        out << text;
        first = false;
      }
      return kExitOk;
    }
    if (*self) return run_selftest(out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "fault: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace sfaas
