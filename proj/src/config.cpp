#include "sfaas/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sfaas/errors.hpp"

namespace sfaas {

using nlohmann::json;

std::vector<int> ScenarioConfig::client_set() const {
  if (!clients.empty()) return clients;
  if (scenario == ScenarioKind::Two) return {10, 25, 50, 100, 200, 400};
  return {50, 70, 90, 110};
}

std::vector<double> ScenarioConfig::f_set() const {
  if (!f_local.empty()) return f_local;
  return {0.2, 0.3, 0.4};
}

oracle::Rates ScenarioConfig::rates() const {
  return {arrival_rate_per_min / 60.0, 1.0 / mean_local_service_s, 1.0 / mean_remote_service_s};
}

PlatformParams ScenarioConfig::platform_params(int n) const {
  PlatformParams p;
  p.clients = n;
  p.containers = containers;
  p.nodes = nodes;
  p.function.local_service_rate = 1.0 / mean_local_service_s;
  p.function.remote_service_rate = 1.0 / mean_remote_service_s;
  p.function.state_size_bytes = state_size_bytes;
  p.arrival_rate = arrival_rate_per_min / 60.0;
  p.d_down = d_down_s;
  p.d_up = d_up_s;
  p.chain = phase_chain;
  p.dispatch = dispatch;
  p.retry_denied = retry_denied;
  p.network_trigger_rate = network_trigger_rate_per_s;
  p.horizon = horizon_s;
  p.warmup = warmup_fraction * horizon_s;
  p.drain = drain;
  p.check_invariants = check_invariants;
  return p;
}

void ScenarioConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(arrival_rate_per_min, "arrival_rate_per_min");
  positive(mean_local_service_s, "mean_local_service_s");
  positive(mean_remote_service_s, "mean_remote_service_s");
  positive(mean_local_duration_s, "mean_local_duration_s");
  positive(horizon_s, "horizon_s");
  if (mean_local_service_s > mean_remote_service_s) {
    throw ConfigError("mean_local_service_s must not exceed mean_remote_service_s");
  }
  if (!(d_down_s >= 0.0)) throw ConfigError("d_down_s must be >= 0");
  if (!(d_up_s >= 0.0)) throw ConfigError("d_up_s must be >= 0");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) throw ConfigError("warmup_fraction must lie in [0, 1)");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (containers < 0) throw ConfigError("containers must be >= 0");
  if (nodes < 1) throw ConfigError("nodes must be >= 1");
  if (state_size_bytes < 0) throw ConfigError("state_size_bytes must be >= 0");
  if (!(target_denial > 0.0 && target_denial <= 1.0)) throw ConfigError("target_denial must lie in (0, 1]");
  if (!(network_trigger_rate_per_s >= 0.0)) throw ConfigError("network_trigger_rate_per_s must be >= 0");
  if (search_max_containers && *search_max_containers < 1) throw ConfigError("search.max_containers must be >= 1");
  for (int n : client_set()) {
    if (n < 1) throw ConfigError("clients must be >= 1");
  }
  for (double f : f_set()) {
    if (!(f >= 0.0 && f < 1.0)) throw ConfigError("f_local must lie in [0, 1)");
  }
  for (int l : local_containers) {
    for (int n : client_set()) {
      if (l < 0 || l > std::min(n, containers)) {
        throw ConfigError("local_containers value " + std::to_string(l) + " outside [0, min(N, C)] for N=" +
                          std::to_string(n));
      }
    }
  }
}

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::One: return "1";
    case ScenarioKind::Two: return "2";
    case ScenarioKind::Custom: return "custom";
  }
  return "custom";
}

namespace {

// 1-based line of the first occurrence of "key" in the document, 0 if absent.
std::size_t line_of(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
}

class Reader {
 public:
  Reader(std::string_view text, std::string_view origin) : text_(text), origin_(origin) {}

  [[noreturn]] void fail(std::string_view key, const std::string& what) const {
    std::ostringstream msg;
    msg << origin_;
    if (const auto line = line_of(text_, key)) msg << ":" << line;
    msg << ": " << key << ": " << what;
    throw ConfigError(msg.str());
  }

  double number(const json& v, std::string_view key) const {
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }
  std::int64_t integer(const json& v, std::string_view key) const {
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<std::int64_t>();
  }
  bool boolean(const json& v, std::string_view key) const {
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }
  std::string string(const json& v, std::string_view key) const {
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::vector<int> int_list(const json& v, std::string_view key) const {
    std::vector<int> out;
    if (v.is_array()) {
      for (const auto& e : v) out.push_back(static_cast<int>(integer(e, key)));
    } else if (v.is_object()) {
      // {"from": a, "to": b} inclusive range
      if (!v.contains("from") || !v.contains("to")) fail(key, "range needs \"from\" and \"to\"");
      const auto from = integer(v.at("from"), key);
      const auto to = integer(v.at("to"), key);
      if (to < from) fail(key, "range \"to\" is below \"from\"");
      for (auto i = from; i <= to; ++i) out.push_back(static_cast<int>(i));
    } else {
      out.push_back(static_cast<int>(integer(v, key)));
    }
    return out;
  }
  std::vector<double> number_list(const json& v, std::string_view key) const {
    std::vector<double> out;
    if (v.is_array()) {
      for (const auto& e : v) out.push_back(number(e, key));
    } else {
      out.push_back(number(v, key));
    }
    return out;
  }

 private:
  std::string_view text_;
  std::string_view origin_;
};

}  // namespace

ScenarioConfig parse_config(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(origin) + ": malformed JSON: " + e.what());
  }
  Reader rd(text, origin);
  if (!doc.is_object()) rd.fail("<root>", "expected a JSON object");

  ScenarioConfig cfg;
  for (const auto& [key, v] : doc.items()) {
    if (key == "scenario") {
      const std::string s = v.is_number_integer() ? std::to_string(v.get<int>()) : rd.string(v, key);
      if (s == "1") cfg.scenario = ScenarioKind::One;
      else if (s == "2") cfg.scenario = ScenarioKind::Two;
      else if (s == "custom") cfg.scenario = ScenarioKind::Custom;
      else rd.fail(key, "expected 1, 2 or \"custom\"");
    } else if (key == "clients") {
      cfg.clients = rd.int_list(v, key);
    } else if (key == "containers") {
      cfg.containers = static_cast<int>(rd.integer(v, key));
    } else if (key == "local_containers") {
      cfg.local_containers = rd.int_list(v, key);
    } else if (key == "f_local") {
      cfg.f_local = rd.number_list(v, key);
    } else if (key == "mean_local_duration_s") {
      cfg.mean_local_duration_s = rd.number(v, key);
    } else if (key == "arrival_rate_per_min") {
      cfg.arrival_rate_per_min = rd.number(v, key);
    } else if (key == "mean_local_service_s") {
      cfg.mean_local_service_s = rd.number(v, key);
    } else if (key == "mean_remote_service_s") {
      cfg.mean_remote_service_s = rd.number(v, key);
    } else if (key == "d_down_s") {
      cfg.d_down_s = rd.number(v, key);
    } else if (key == "d_up_s") {
      cfg.d_up_s = rd.number(v, key);
    } else if (key == "state_size_bytes") {
      cfg.state_size_bytes = rd.integer(v, key);
    } else if (key == "nodes") {
      cfg.nodes = static_cast<int>(rd.integer(v, key));
    } else if (key == "horizon_s") {
      cfg.horizon_s = rd.number(v, key);
    } else if (key == "warmup_fraction") {
      cfg.warmup_fraction = rd.number(v, key);
    } else if (key == "replications") {
      cfg.replications = static_cast<int>(rd.integer(v, key));
    } else if (key == "master_seed") {
      if (!v.is_number_unsigned()) rd.fail(key, "expected a nonnegative integer");
      cfg.master_seed = v.get<std::uint64_t>();
    } else if (key == "output_dir") {
      cfg.output_dir = rd.string(v, key);
    } else if (key == "policy") {
      const auto s = rd.string(v, key);
      if (s == "static_split") cfg.policy = PolicyKind::StaticSplit;
      else if (s == "admission") cfg.policy = PolicyKind::Admission;
      else rd.fail(key, "expected \"static_split\" or \"admission\"");
    } else if (key == "target_denial") {
      cfg.target_denial = rd.number(v, key);
    } else if (key == "search") {
      if (!v.is_object()) rd.fail(key, "expected an object");
      for (const auto& [sub, sv] : v.items()) {
        if (sub != "max_containers") rd.fail(sub, "unknown key in \"search\"");
        cfg.search_max_containers = static_cast<int>(rd.integer(sv, sub));
      }
    } else if (key == "search.max_containers") {
      cfg.search_max_containers = static_cast<int>(rd.integer(v, key));
    } else if (key == "phase_chain") {
      const auto s = rd.string(v, key);
      if (s == "continuous") cfg.phase_chain = PhaseChain::Continuous;
      else if (s == "per_invocation") cfg.phase_chain = PhaseChain::PerInvocation;
      else rd.fail(key, "expected \"continuous\" or \"per_invocation\"");
    } else if (key == "dispatch") {
      const auto s = rd.string(v, key);
      if (s == "shared_fifo") cfg.dispatch = Dispatch::SharedFifo;
      else if (s == "per_container_random") cfg.dispatch = Dispatch::PerContainerRandom;
      else rd.fail(key, "expected \"shared_fifo\" or \"per_container_random\"");
    } else if (key == "retry_denied") {
      cfg.retry_denied = rd.boolean(v, key);
    } else if (key == "network_trigger_rate_per_s") {
      cfg.network_trigger_rate_per_s = rd.number(v, key);
    } else if (key == "write_invocations") {
      cfg.write_invocations = rd.boolean(v, key);
    } else if (key == "drain") {
      cfg.drain = rd.boolean(v, key);
    } else if (key == "check_invariants") {
      cfg.check_invariants = rd.boolean(v, key);
    } else if (key == "description") {
      rd.string(v, key);
    } else {
      rd.fail(key, "unknown key");
    }
  }

  // Re-raise semantic errors with the line of the field they name.
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    const auto field = what.substr(0, what.find(' '));
    rd.fail(field, what.substr(std::min(what.size(), field.size() + 1)));
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace sfaas
