#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sfaas/cli.hpp"
#include "sfaas/config.hpp"
#include "sfaas/errors.hpp"
#include "sfaas/scenarios.hpp"

using namespace sfaas;
namespace fs = std::filesystem;

namespace {

std::string parse_error(const std::string& json) {
  try {
    parse_config(json, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sfaas");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("sfaas_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST_CASE("empty config takes the defaults") {
  auto c = parse_config("{}");
  CHECK(c.scenario == ScenarioKind::One);
  CHECK(c.client_set() == std::vector<int>{50, 70, 90, 110});
  CHECK(c.containers == 40);
  CHECK(c.horizon_s == 2.0e5);
  CHECK(c.replications == 20);
  CHECK(c.f_set() == std::vector<double>{0.2, 0.3, 0.4});
  auto p = c.platform_params(50);
  CHECK(p.arrival_rate == doctest::Approx(0.075));
  CHECK(p.warmup == doctest::Approx(2.0e4));
  CHECK(p.function.remote_service_rate == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("config fields and client ranges") {
  auto c = parse_config(R"({
    "scenario": 2,
    "clients": {"from": 10, "to": 13},
    "f_local": [0.25],
    "target_denial": 0.05,
    "search": {"max_containers": 30},
    "arrival_rate_per_min": 6,
    "d_down_s": 0.5,
    "phase_chain": "per_invocation",
    "dispatch": "per_container_random"
  })");
  CHECK(c.scenario == ScenarioKind::Two);
  CHECK(c.client_set() == std::vector<int>{10, 11, 12, 13});
  CHECK(c.f_set() == std::vector<double>{0.25});
  CHECK(c.target_denial == 0.05);
  CHECK(c.search_max_containers == 30);
  CHECK(c.rates().arrival_per_client == doctest::Approx(0.1));
  CHECK(c.d_down_s == 0.5);
  CHECK(c.phase_chain == PhaseChain::PerInvocation);
  CHECK(c.dispatch == Dispatch::PerContainerRandom);
  CHECK(parse_config(R"({"clients": 7})").client_set() == std::vector<int>{7});
}

TEST_CASE("config errors name the file, line and field") {
  auto e = parse_error("{\n  \"clients\": 50,\n  \"containrs\": 40\n}");
  CHECK(e.find("cfg.json:3") != std::string::npos);
  CHECK(e.find("containrs") != std::string::npos);

  e = parse_error("{\n  \"horizon_s\": \"long\"\n}");
  CHECK(e.find("cfg.json:2") != std::string::npos);
  CHECK(e.find("horizon_s") != std::string::npos);

  e = parse_error("{\n\n  \"f_local\": [1.5]\n}");
  CHECK(e.find("cfg.json:3") != std::string::npos);
  CHECK(e.find("f_local") != std::string::npos);

  e = parse_error("{\n  \"clients\": 50,\n  \"warmup_fraction\": 1.0\n}");
  CHECK(e.find("warmup_fraction") != std::string::npos);
  CHECK(e.find("cfg.json:3") != std::string::npos);

  e = parse_error("{\n  \"clients\": 50,,\n}");
  CHECK(e.find("cfg.json") != std::string::npos);
  CHECK(e.find("2") != std::string::npos);

  CHECK_FALSE(parse_error("{\"replications\": 0}").empty());
  CHECK_FALSE(parse_error("{\"containers\": -1}").empty());
  CHECK_FALSE(parse_error("{\"mean_local_service_s\": 4}").empty());
  CHECK_FALSE(parse_error("[]").empty());
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("scenario-1 sweep defaults to one step past the frontier") {
  ScenarioConfig c;
  auto s = scenario1_sweep(c, 110);
  REQUIRE(s.size() == 21);
  CHECK(s.front() == 0);
  CHECK(s.back() == 20);
  CHECK(scenario1_sweep(c, 30).back() == 30);
  c.local_containers = {0, 5};
  CHECK(scenario1_sweep(c, 50) == std::vector<int>{0, 5});
}

TEST_CASE("scenario 1 end to end") {
  ScenarioConfig c;
  c.clients = {50};
  c.local_containers = {0, 10, 38};
  c.replications = 3;
  c.horizon_s = 3.0e4;
  auto r = run_scenario1(c);
  REQUIRE(r.points.size() == 3);
  CHECK_FALSE(r.points[0].simulated.unstable);
  CHECK_FALSE(r.points[1].simulated.unstable);
  CHECK(r.points[2].simulated.unstable);
  CHECK_FALSE(r.points[2].analytic.average.is_stable());
  CHECK_FALSE(r.all_unstable());
  REQUIRE(r.minima.size() == 1);
  CHECK(r.minima[0].oracle_local == oracle::scenario1_optimal_split(50));

  auto rows = summary_rows(c, r);
  CHECK(rows.size() == 6);
  int oracle_rows = 0;
  for (const auto& row : rows) oracle_rows += row.scenario == "1-oracle";
  CHECK(oracle_rows == 3);
}

TEST_CASE("CLI: oracle table") {
  auto r = cli({"oracle", "--scenario1", "--clients", "110"});
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "N,L,W_local,W_remote,W_avg,stable");
  int rows = 0;
  for (std::string l; std::getline(in, l);) ++rows;
  CHECK(rows == 41);
  CHECK(r.out.find("110,20,") != std::string::npos);
}

TEST_CASE("CLI: validation failures exit 1") {
  CHECK(cli({"scenario1", "--bogus"}).code == 1);
  CHECK(cli({}).code == 1);
  auto missing = cli({"scenario1", "--config", "/nonexistent/x.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("/nonexistent/x.json") != std::string::npos);
  CHECK(cli({"scenario1", "--clients", "50", "--local", "45", "--quiet"}).code == 1);
  CHECK(cli({"scenario2", "--f-local", "1.2", "--quiet"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("CLI: scenario 2 smoke run writes its tables") {
  auto dir = scratch("s2");
  auto r = cli({"scenario2", "--clients", "10", "--f-local", "0.2", "--replications", "4", "--horizon",
                "20000", "--out", dir.string(), "--quiet"});
  CHECK(r.code == 0);
  auto summary = lines_of(dir / "summary.csv");
  REQUIRE(summary.size() == 2);
  CHECK(summary[0] == "scenario,N,C,L_or_f,mean_s,ci_lo,ci_hi,p95_s,p99_s,denial,bytes,unstable");
  CHECK(summary[1].rfind("2,10,", 0) == 0);
  auto prov = lines_of(dir / "provisioning.csv");
  REQUIRE(prov.size() == 2);
  CHECK(prov[1].rfind("10,0.2,", 0) == 0);
}

TEST_CASE("CLI: saturated search exits 3") {
  auto r = cli({"scenario2", "--clients", "10", "--f-local", "0.4", "--target-denial", "0.001",
                "--max-containers", "4", "--replications", "2", "--horizon", "5000", "--out",
                scratch("sat").string(), "--quiet"});
  CHECK(r.code == 3);
}

TEST_CASE("CLI: simulate writes a reproducible invocation trace") {
  auto cfg_dir = scratch("sim");
  auto cfg = cfg_dir / "run.json";
  std::ofstream(cfg) << R"({"clients": 8, "containers": 6, "policy": "admission", "f_local": [0.3],
    "mean_local_duration_s": 30, "d_down_s": 0.2, "d_up_s": 0.2, "horizon_s": 2000,
    "replications": 2, "write_invocations": true, "drain": true})";
  auto a = cli({"simulate", "--config", cfg.string(), "--out", (cfg_dir / "a").string(), "--quiet"});
  auto b = cli({"simulate", "--config", cfg.string(), "--out", (cfg_dir / "b").string(), "--quiet"});
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  auto ta = lines_of(cfg_dir / "a" / "invocations.csv");
  CHECK(ta.size() > 100);
  CHECK(ta == lines_of(cfg_dir / "b" / "invocations.csv"));
  CHECK(ta[0] == "replication,client,arrival_s,completion_s,preferred,served,waited_s");
}

TEST_CASE("installed binary honours exit codes") {
  const char* bin = std::getenv("SFAAS_CLI");
  if (bin == nullptr) return;
  auto run = [&](const std::string& args) {
    int status = std::system((std::string(bin) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  CHECK(run("oracle --scenario1 --clients 110") == 0);
  CHECK(run("scenario1 --no-such-flag") == 1);
  CHECK(run("simulate --config /nonexistent.json") == 1);
  CHECK(run("selftest") == 0);
}

TEST_CASE("shipped configs parse") {
  const char* src = std::getenv("SFAAS_SOURCE_DIR");
  if (src == nullptr) return;
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(src) / "configs")) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++seen;
  }
  CHECK(seen >= 2);
}
