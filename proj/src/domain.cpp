#include "sfaas/domain.hpp"

#include "sfaas/errors.hpp"

namespace sfaas {

std::string_view to_string(Mode m) { return m == Mode::Local ? "local" : "remote"; }

void FunctionType::validate() const {
  if (!(remote_service_rate > 0.0)) throw ConfigError("remote service rate must be positive");
  if (!(local_service_rate >= remote_service_rate)) {
    throw ConfigError("local service rate must be at least the remote service rate");
  }
  if (state_size_bytes < 0) throw ConfigError("state size must be nonnegative");
}

ClientState::ClientState(ClientId id, std::uint32_t function_type, double arrival_rate,
                         std::uint64_t master_seed)
    : id(id),
      session_id(id),
      function_type(function_type),
      arrival_rate(arrival_rate),
      arrival_stream(master_seed, {StreamKind::ClientArrival, id}),
      phase_stream(master_seed, {StreamKind::ClientPhase, id}) {}

Container::Container(ContainerId id, NodeId node, std::uint64_t master_seed)
    : id(id), host_node(node), service_stream(master_seed, {StreamKind::ContainerService, id}) {}

void BrokerTable::register_client(ClientId c) {
  if (records_.size() <= c) records_.resize(c + 1);
  if (!records_[c]) ++count_;
  records_[c] = RoutingRecord{};
}

bool BrokerTable::has(ClientId c) const { return c < records_.size() && records_[c].has_value(); }

const RoutingRecord& BrokerTable::record(ClientId c) const { return *records_.at(c); }
RoutingRecord& BrokerTable::record(ClientId c) { return *records_.at(c); }

std::optional<DispatchTarget> route(const BrokerTable& broker, ClientId client) {
  if (!broker.has(client)) return std::nullopt;
  const auto& r = broker.record(client);
  if (r.buffering) return DispatchTarget{DispatchTarget::Kind::TransitionBuffer, 0};
  if (r.mode == Mode::Local) return DispatchTarget{DispatchTarget::Kind::LocalContainer, r.container};
  return DispatchTarget{DispatchTarget::Kind::RemotePool, 0};
}

ExternalStateService::ExternalStateService(std::size_t sessions, std::int64_t state_size_bytes)
    : sessions_(sessions), state_size_bytes_(state_size_bytes) {}

std::uint64_t ExternalStateService::download(std::uint32_t session) {
  auto& s = sessions_.at(session);
  if (s.held_locally) ++violations_;
  s.held_locally = true;
  ++downloads_;
  transfer_bytes_ += state_size_bytes_;
  return s.version;
}

std::uint64_t ExternalStateService::upload(std::uint32_t session, std::uint64_t base_version) {
  auto& s = sessions_.at(session);
  if (!s.held_locally || s.version != base_version) ++violations_;
  s.held_locally = false;
  ++s.version;
  ++uploads_;
  transfer_bytes_ += state_size_bytes_;
  return s.version;
}

std::uint64_t ExternalStateService::remote_read(std::uint32_t session) {
  const auto& s = sessions_.at(session);
  if (s.held_locally) ++violations_;
  return s.version;
}

void ExternalStateService::remote_commit(std::uint32_t session) {
  auto& s = sessions_.at(session);
  if (s.held_locally) ++violations_;
  ++s.version;
}

}  // namespace sfaas
