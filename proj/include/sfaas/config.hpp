#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfaas/oracle.hpp"
#include "sfaas/platform.hpp"

namespace sfaas {

enum class ScenarioKind : std::uint8_t { One, Two, Custom };
enum class PolicyKind : std::uint8_t { StaticSplit, Admission };

// Full experiment parameterization. Every field has a default, so an empty
// JSON object is a valid scenario-1 config.
struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::One;
  std::vector<int> clients;           // empty: {50,70,90,110} (1), {10,...,400} (2)
  int containers = 40;
  std::vector<int> local_containers;  // scenario-1 sweep; empty: 0..frontier+1
  std::vector<double> f_local;        // empty: {0.2,0.3,0.4}
  double mean_local_duration_s = 300.0;
  double arrival_rate_per_min = 4.5;
  double mean_local_service_s = 1.0;
  double mean_remote_service_s = 3.0;
  double d_down_s = 0.0;
  double d_up_s = 0.0;
  std::int64_t state_size_bytes = 100'000;
  int nodes = 1;
  double horizon_s = 2.0e5;
  double warmup_fraction = 0.1;
  int replications = 20;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  PolicyKind policy = PolicyKind::StaticSplit;  // `simulate` only
  double target_denial = 0.01;
  std::optional<int> search_max_containers;
  PhaseChain phase_chain = PhaseChain::Continuous;
  Dispatch dispatch = Dispatch::SharedFifo;
  bool retry_denied = true;
  double network_trigger_rate_per_s = 0.0;
  bool write_invocations = false;
  bool drain = false;
  bool check_invariants = false;

  std::vector<int> client_set() const;
  std::vector<double> f_set() const;
  oracle::Rates rates() const;
  // Platform parameters for one client count; policy and phase left for the caller.
  PlatformParams platform_params(int clients) const;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Parses a JSON document. Errors carry `origin` and the line of the offending
// key (or the parser's line/column for malformed JSON).
ScenarioConfig parse_config(std::string_view json_text, std::string_view origin = "<config>");

// Reads and parses a file; a missing file is a ConfigError naming the path.
ScenarioConfig load_config(const std::string& path);

std::string_view to_string(ScenarioKind k);

}  // namespace sfaas
