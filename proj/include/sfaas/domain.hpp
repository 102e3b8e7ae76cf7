#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "sfaas/kernel.hpp"
#include "sfaas/rng.hpp"

namespace sfaas {

using ClientId = std::uint32_t;
using ContainerId = std::uint32_t;
using NodeId = std::uint32_t;

enum class Mode : std::uint8_t { Remote, Local };

std::string_view to_string(Mode m);

// A stateful function and its two execution variants.
struct FunctionType {
  std::uint32_t id = 0;
  double remote_service_rate = 1.0 / 3.0;  // per second; includes state fetch/store
  double local_service_rate = 1.0;         // per second
  std::int64_t state_size_bytes = 100'000;

  // Throws ConfigError unless local >= remote > 0 and size >= 0.
  void validate() const;
};

struct Invocation {
  ClientId client = 0;
  SimTime arrival = 0.0;
  Mode preferred = Mode::Remote;  // client's preference when it arrived
};

// One client with exactly one session (session id == client id).
struct ClientState {
  ClientState(ClientId id, std::uint32_t function_type, double arrival_rate,
              std::uint64_t master_seed);

  ClientId id;
  std::uint32_t session_id;
  std::uint32_t function_type;
  double arrival_rate;  // per second
  Mode preferred_mode = Mode::Remote;
  Mode actual_mode = Mode::Remote;
  std::optional<ContainerId> bound_container;
  RngStream arrival_stream;
  RngStream phase_stream;

  // Remote invocations routed to the pool and not yet completed.
  std::uint32_t remote_outstanding = 0;
};

// Lifecycle of a worker container.
enum class ContainerRole : std::uint8_t {
  Pool,       // remote-state, shared by all clients
  Reserved,   // taken from the pool for a pending remote->local transition
  Local,      // bound to one session
  Releasing,  // local->remote transition: draining and uploading state
};

struct Container {
  Container(ContainerId id, NodeId node, std::uint64_t master_seed);

  ContainerId id;
  NodeId host_node;
  ContainerRole role = ContainerRole::Pool;
  std::optional<ClientId> session;  // set for Reserved, Local and Releasing
  std::deque<Invocation> queue;     // pending invocations (local or per-container dispatch)
  std::optional<Invocation> in_service;
  std::optional<SimTime> busy_until;
  SimTime service_started = 0.0;
  double busy_seconds = 0.0;
  std::uint64_t loaded_version = 0;  // state version downloaded at instantiation
  RngStream service_stream;

  bool idle() const { return !in_service.has_value(); }
};

struct RoutingRecord {
  Mode mode = Mode::Remote;
  ContainerId container = 0;  // meaningful when mode == Local
  bool buffering = false;     // a transition is in flight; hold new invocations
};

// Broker state: one routing record per registered client.
class BrokerTable {
 public:
  void register_client(ClientId c);
  bool has(ClientId c) const;
  const RoutingRecord& record(ClientId c) const;
  RoutingRecord& record(ClientId c);
  std::size_t size() const { return count_; }

 private:
  std::vector<std::optional<RoutingRecord>> records_;
  std::size_t count_ = 0;
};

struct DispatchTarget {
  enum class Kind : std::uint8_t { RemotePool, LocalContainer, TransitionBuffer };
  Kind kind = Kind::RemotePool;
  ContainerId container = 0;
};

// Returns nullopt for an unknown client (a misroute).
std::optional<DispatchTarget> route(const BrokerTable& broker, ClientId client);

// External state store. Latency is folded into the remote service time; this
// object only tracks versions for safety checks and bytes for traffic.
class ExternalStateService {
 public:
  explicit ExternalStateService(std::size_t sessions = 0, std::int64_t state_size_bytes = 100'000);

  std::uint64_t version(std::uint32_t session) const { return sessions_[session].version; }
  bool held_locally(std::uint32_t session) const { return sessions_[session].held_locally; }

  // Local container instantiation: copies the latest version out.
  std::uint64_t download(std::uint32_t session);
  // Local->remote: writes the local copy back. `base_version` is what the
  // container downloaded; any intervening commit is a lost update.
  std::uint64_t upload(std::uint32_t session, std::uint64_t base_version);
  // Remote-state invocation reading and committing state.
  std::uint64_t remote_read(std::uint32_t session);
  void remote_commit(std::uint32_t session);

  std::int64_t transfer_bytes() const { return transfer_bytes_; }
  std::uint64_t uploads() const { return uploads_; }
  std::uint64_t downloads() const { return downloads_; }
  std::uint64_t violations() const { return violations_; }

 private:
  struct Session {
    std::uint64_t version = 0;
    bool held_locally = false;
  };
  std::vector<Session> sessions_;
  std::int64_t state_size_bytes_;
  std::int64_t transfer_bytes_ = 0;
  std::uint64_t uploads_ = 0;
  std::uint64_t downloads_ = 0;
  std::uint64_t violations_ = 0;
};

}  // namespace sfaas
