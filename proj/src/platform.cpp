#include "sfaas/platform.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sfaas/errors.hpp"

namespace sfaas {

void PlatformParams::validate() const {
  if (clients < 1) throw ConfigError("clients must be >= 1");
  if (containers < 0) throw ConfigError("containers must be >= 0");
  if (nodes < 1) throw ConfigError("nodes must be >= 1");
  function.validate();
  if (!(arrival_rate > 0.0)) throw ConfigError("arrival rate must be positive");
  if (!(d_down >= 0.0) || !(d_up >= 0.0)) throw ConfigError("transition delays must be >= 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");
  if (!(warmup >= 0.0) || !(warmup < horizon)) throw ConfigError("warm-up must lie in [0, horizon)");
  if (ticks < 1) throw ConfigError("ticks must be >= 1");
  if (!(network_trigger_rate >= 0.0)) throw ConfigError("network trigger rate must be >= 0");
  if (const auto* split = std::get_if<StaticSplit>(&policy)) {
    apply_static_split(split->local, clients, containers);
  }
  if (chain == PhaseChain::PerInvocation && phase.enabled()) {
    phase.per_invocation_probabilities(arrival_rate);
  }
}

Platform::Platform(PlatformParams params, std::uint64_t seed)
    : params_(std::move(params)),
      seed_(seed),
      state_(static_cast<std::size_t>(params_.clients), params_.function.state_size_bytes),
      dispatch_stream_(seed, {StreamKind::Dispatch, 0}),
      network_stream_(seed, {StreamKind::NetworkTrigger, 0}) {
  params_.validate();
  admission_ = std::holds_alternative<AdmissionOnDemand>(params_.policy);
  const auto n = static_cast<std::size_t>(params_.clients);
  const auto c = static_cast<std::size_t>(params_.containers);
  clients_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    clients_.emplace_back(static_cast<ClientId>(i), params_.function.id, params_.arrival_rate, seed);
    broker_.register_client(static_cast<ClientId>(i));
  }
  jobs_.resize(n);
  expected_version_.assign(n, 0);
  containers_.reserve(c);
  pool_slot_.assign(c, -1);
  current_service_.assign(c, 0.0);
  for (std::size_t i = 0; i < c; ++i) {
    const auto id = static_cast<ContainerId>(i);
    containers_.emplace_back(id, static_cast<NodeId>(i % static_cast<std::size_t>(params_.nodes)), seed);
    add_to_pool(id);
    idle_pool_.insert(id);
  }
  if (admission_ && params_.chain == PhaseChain::PerInvocation && params_.phase.enabled()) {
    per_invocation_ = params_.phase.per_invocation_probabilities(params_.arrival_rate);
  }
  const double expected = params_.clients * params_.arrival_rate * params_.horizon;
  records_.reserve(static_cast<std::size_t>(expected * 1.02) + 64);
}

// ---------------------------------------------------------------------------
// Setup and driving

void Platform::start() {
  if (started_) return;
  started_ = true;

  if (const auto* split = std::get_if<StaticSplit>(&params_.policy)) {
    for (ClientId c : apply_static_split(split->local, params_.clients, params_.containers)) {
      clients_[c].preferred_mode = Mode::Local;
      transition_to_local(c, Trigger::Network, /*forced=*/true);
    }
  } else {
    for (auto& cl : clients_) {
      cl.preferred_mode = params_.phase.initial_preference(cl.phase_stream);
      if (cl.preferred_mode == Mode::Local) ++local_preferring_;
      if (params_.chain == PhaseChain::Continuous) {
        if (auto next = next_phase_change(cl, params_.phase, 0.0)) {
          kernel_.schedule(next->at, EventKind::PhaseChange, cl.id);
        }
      }
    }
    for (auto& cl : clients_) {
      if (cl.preferred_mode == Mode::Local) {
        ++counters_.trigger_attempts;
        if (!transition_to_local(cl.id, Trigger::App)) ++counters_.trigger_denials;
      }
    }
  }

  for (auto& cl : clients_) kernel_.schedule(next_arrival(cl, 0.0), EventKind::InvocationArrival, cl.id);
  if (params_.network_trigger_rate > 0.0) {
    kernel_.schedule(exp_sample(params_.network_trigger_rate, network_stream_), EventKind::NetworkTrigger);
  }
  kernel_.schedule(params_.horizon / params_.ticks, EventKind::MeasurementTick);
  kernel_.schedule(params_.horizon, EventKind::Horizon);
}

void Platform::run_until(SimTime t) {
  start();
  kernel_.run_until(t, [this](const SimEvent& ev) { handle(ev); });
}

void Platform::drain() {
  start();
  accepting_ = false;
  kernel_.run_while([] { return true; }, [this](const SimEvent& ev) { handle(ev); });
}

RunResult Platform::finish() {
  sample_preferences();
  RunResult out;
  out.counters = counters_;
  out.counters.version_violations += state_.violations();
  out.in_system_at_end = in_system();
  out.queue_samples = samples_;
  out.local_preference_time = local_preference_time_;
  out.observed_time = kernel_.now() * params_.clients;

  out.summary = summarize(records_, params_.warmup);
  if (!admission_) out.summary.denial_fraction.reset();
  out.summary.seed = seed_;
  out.summary.state_transfer_bytes = state_.transfer_bytes();
  out.summary.unstable = detect_instability(samples_, params_.clients);
  const double span = std::max(kernel_.now(), 1e-12);
  out.summary.utilization.reserve(containers_.size());
  for (const auto& k : containers_) {
    double busy = k.busy_seconds;
    if (k.in_service) busy += kernel_.now() - k.service_started;
    out.summary.utilization.push_back(std::min(1.0, busy / span));
  }
  out.records = std::move(records_);
  out.transitions = std::move(transitions_);
  records_.clear();
  transitions_.clear();
  return out;
}

RunResult Platform::run() {
  run_until(params_.horizon);
  if (params_.drain) drain();
  return finish();
}

void Platform::schedule_invocation(ClientId client, SimTime at) {
  kernel_.schedule(at, EventKind::InvocationArrival, client, /*injected=*/1);
}

void Platform::handle(const SimEvent& ev) {
  ++counters_.events;
  switch (ev.kind) {
    case EventKind::InvocationArrival: on_arrival(ev); break;
    case EventKind::ServiceCompletion: on_completion(ev.subject); break;
    case EventKind::PhaseChange: on_phase_change(ev.subject); break;
    case EventKind::TransitionStep: on_transition_step(ev.subject, ev.aux); break;
    case EventKind::MeasurementTick: on_tick(); break;
    case EventKind::NetworkTrigger: on_network_trigger(); break;
    case EventKind::Horizon: break;
  }
  if (params_.check_invariants && !check_containers()) ++counters_.invariant_violations;
}

// ---------------------------------------------------------------------------
// Invocations

void Platform::on_arrival(const SimEvent& ev) {
  const bool injected = ev.aux == 1;
  if (!accepting_ && !injected) return;
  auto& cl = clients_.at(ev.subject);
  if (!injected) kernel_.schedule(next_arrival(cl, kernel_.now()), EventKind::InvocationArrival, cl.id);
  ++counters_.generated;

  if (admission_ && params_.chain == PhaseChain::PerInvocation && params_.phase.enabled()) {
    const bool local = cl.preferred_mode == Mode::Local;
    const double p = local ? per_invocation_.local_to_remote : per_invocation_.remote_to_local;
    if (cl.phase_stream.uniform01() <= p) set_preference(cl.id, local ? Mode::Remote : Mode::Local);
  }

  if (admission_ && params_.retry_denied && cl.preferred_mode == Mode::Local &&
      cl.actual_mode == Mode::Remote && !jobs_[cl.id]) {
    ++counters_.retry_attempts;
    if (!transition_to_local(cl.id, Trigger::App)) ++counters_.retry_denials;
  }

  dispatch(Invocation{cl.id, kernel_.now(), cl.preferred_mode});
}

void Platform::dispatch(const Invocation& inv) {
  const auto target = route(broker_, inv.client);
  if (!target) {
    ++counters_.misroutes;
    return;
  }
  switch (target->kind) {
    case DispatchTarget::Kind::RemotePool: enqueue_remote(inv); break;
    case DispatchTarget::Kind::LocalContainer: enqueue_local(target->container, inv); break;
    case DispatchTarget::Kind::TransitionBuffer: {
      auto& job = *jobs_.at(inv.client);
      job.buffered.push_back(inv);
      ++job.buffered_total;
      ++waiting_;
      break;
    }
  }
}

void Platform::enqueue_remote(const Invocation& inv, bool count_outstanding) {
  if (count_outstanding) ++clients_[inv.client].remote_outstanding;
  if (params_.dispatch == Dispatch::PerContainerRandom && !pool_members_.empty()) {
    const auto pick = static_cast<std::size_t>(dispatch_stream_.next_u64() % pool_members_.size());
    auto& k = containers_[pool_members_[pick]];
    if (k.idle()) {
      start_service(k, inv);
    } else {
      k.queue.push_back(inv);
      ++waiting_;
    }
    return;
  }
  if (!idle_pool_.empty()) {
    start_service(containers_[*idle_pool_.begin()], inv);
    return;
  }
  shared_queue_.push_back(inv);
  ++waiting_;
}

void Platform::enqueue_local(ContainerId cid, const Invocation& inv) {
  auto& k = containers_.at(cid);
  if (k.idle() && k.queue.empty()) {
    start_service(k, inv);
  } else {
    k.queue.push_back(inv);
    ++waiting_;
  }
}

void Platform::start_service(Container& k, const Invocation& inv) {
  const bool local = k.role == ContainerRole::Local || k.role == ContainerRole::Releasing;
  if (local) {
    if (k.session != inv.client) ++counters_.invariant_violations;
  } else {
    const auto seen = state_.remote_read(clients_[inv.client].session_id);
    if (seen != expected_version_[inv.client]) ++counters_.version_violations;
  }
  const double rate = local ? params_.function.local_service_rate : params_.function.remote_service_rate;
  const double s = exp_sample(rate, k.service_stream);
  if (k.role == ContainerRole::Pool) idle_pool_.erase(k.id);
  k.in_service = inv;
  k.service_started = kernel_.now();
  k.busy_until = kernel_.now() + s;
  current_service_[k.id] = s;
  ++in_service_;
  kernel_.schedule(*k.busy_until, EventKind::ServiceCompletion, k.id);
}

void Platform::pull_remote_work(Container& k) {
  if (!k.queue.empty()) {
    const Invocation next = k.queue.front();
    k.queue.pop_front();
    --waiting_;
    start_service(k, next);
  } else if (!shared_queue_.empty()) {
    const Invocation next = shared_queue_.front();
    shared_queue_.pop_front();
    --waiting_;
    start_service(k, next);
  } else {
    idle_pool_.insert(k.id);
  }
}

void Platform::on_completion(ContainerId cid) {
  auto& k = containers_.at(cid);
  const Invocation inv = *k.in_service;
  const bool local = k.role == ContainerRole::Local || k.role == ContainerRole::Releasing;
  const SimTime now = kernel_.now();
  records_.push_back(LatencyRecord{inv.client, inv.arrival, now, current_service_[cid], now - inv.arrival,
                                   inv.preferred, local ? Mode::Local : Mode::Remote});
  k.busy_seconds += now - k.service_started;
  k.in_service.reset();
  k.busy_until.reset();
  --in_service_;
  ++counters_.completed;

  auto& cl = clients_[inv.client];
  if (!local) {
    --cl.remote_outstanding;
    state_.remote_commit(cl.session_id);
    ++expected_version_[inv.client];
  }

  switch (k.role) {
    case ContainerRole::Pool:
      pull_remote_work(k);
      break;
    case ContainerRole::Reserved:
      if (auto& job = jobs_[*k.session]) advance_to_local(*job, false);
      break;
    case ContainerRole::Local:
      if (!k.queue.empty()) {
        const Invocation next = k.queue.front();
        k.queue.pop_front();
        --waiting_;
        start_service(k, next);
      }
      break;
    case ContainerRole::Releasing:
      if (!k.queue.empty()) {
        const Invocation next = k.queue.front();
        k.queue.pop_front();
        --waiting_;
        start_service(k, next);
      } else if (auto& job = jobs_[*k.session]) {
        advance_to_remote(*job, false);
      }
      break;
  }

  // A pending remote->local transition waits for the client's remote work.
  if (!local && cl.remote_outstanding == 0) {
    auto& job = jobs_[inv.client];
    if (job && job->direction == Direction::ToLocal && job->step == Step::ContainerSetup) {
      advance_to_local(*job, false);
    }
  }
}

// ---------------------------------------------------------------------------
// Pool bookkeeping

void Platform::add_to_pool(ContainerId cid) {
  auto& k = containers_[cid];
  k.role = ContainerRole::Pool;
  k.session.reset();
  pool_slot_[cid] = static_cast<std::int64_t>(pool_members_.size());
  pool_members_.push_back(cid);
}

void Platform::remove_from_pool(ContainerId cid) {
  const auto slot = pool_slot_[cid];
  const ContainerId last = pool_members_.back();
  pool_members_[static_cast<std::size_t>(slot)] = last;
  pool_slot_[last] = slot;
  pool_members_.pop_back();
  pool_slot_[cid] = -1;
  idle_pool_.erase(cid);
}

std::optional<ContainerId> Platform::pick_pool_container() const {
  if (!idle_pool_.empty()) return *idle_pool_.begin();
  if (pool_members_.empty()) return std::nullopt;
  return *std::min_element(pool_members_.begin(), pool_members_.end());
}

// ---------------------------------------------------------------------------
// Transitions

bool Platform::transition_to_local(ClientId c, Trigger trigger, bool forced) {
  auto& cl = clients_.at(c);
  if (cl.actual_mode != Mode::Remote || jobs_[c]) {
    throw SimulationFault("transition_to_local requires a remote client with no transition in flight");
  }
  // ResourceCheck
  if (!forced) {
    const CapacityView view{params_.clients,
                            params_.containers,
                            static_cast<int>(pool_members_.size()),
                            local_bound_ + reserved_,
                            params_.arrival_rate,
                            params_.function.remote_service_rate};
    if (grant_local(view) == Decision::Deny) {
      if (trigger == Trigger::Network) ++counters_.network_denials;
      return false;
    }
  }
  const auto cid = pick_pool_container();
  if (!cid) {
    if (trigger == Trigger::Network) ++counters_.network_denials;
    return false;
  }

  // ContainerSetup: the container leaves the pool once it finishes any
  // remote invocation it is serving.
  auto& k = containers_[*cid];
  remove_from_pool(*cid);
  k.role = ContainerRole::Reserved;
  k.session = c;
  ++reserved_;
  if (!k.queue.empty()) {
    auto orphaned = std::move(k.queue);
    k.queue.clear();
    waiting_ -= orphaned.size();
    for (const auto& inv : orphaned) enqueue_remote(inv, /*count_outstanding=*/false);
  }

  auto& job = jobs_[c].emplace();
  job.client = c;
  job.direction = Direction::ToLocal;
  job.trigger = trigger;
  job.step = Step::ContainerSetup;
  job.container = *cid;
  job.started_at = kernel_.now();
  job.generation = next_generation_++;
  broker_.record(c).buffering = true;
  advance_to_local(job, false);
  return true;
}

void Platform::advance_to_local(TransitionJob& job, bool delay_elapsed) {
  auto& k = containers_[job.container];
  auto& cl = clients_[job.client];
  if (job.step == Step::ContainerSetup) {
    // The download must not overtake remote invocations that still commit state.
    if (!k.idle() || cl.remote_outstanding > 0) return;
    job.step = Step::StateDownload;
    if (params_.d_down > 0.0) {
      job.delay_pending = true;
      kernel_.schedule_in(params_.d_down, EventKind::TransitionStep, job.client, job.generation);
      return;
    }
    delay_elapsed = true;
  }
  if (job.step == Step::StateDownload) {
    if (!delay_elapsed) return;
    job.delay_pending = false;
    const auto v = state_.download(cl.session_id);
    if (v != expected_version_[job.client]) ++counters_.version_violations;
    k.loaded_version = v;
    job.step = Step::BrokerUpdate;
  }
  if (job.step == Step::BrokerUpdate) {
    auto& rec = broker_.record(job.client);
    rec.mode = Mode::Local;
    rec.container = k.id;
    rec.buffering = false;
    k.role = ContainerRole::Local;
    --reserved_;
    ++local_bound_;
    cl.actual_mode = Mode::Local;
    cl.bound_container = k.id;
    ++counters_.to_local;
    auto buffered = std::move(job.buffered);
    waiting_ -= buffered.size();
    finish_job(job);
    for (const auto& inv : buffered) enqueue_local(k.id, inv);
    reconcile(cl.id);
  }
}

void Platform::transition_to_remote(ClientId c, Trigger trigger) {
  auto& cl = clients_.at(c);
  if (cl.actual_mode != Mode::Local || jobs_[c]) {
    throw SimulationFault("transition_to_remote requires a local client with no transition in flight");
  }
  auto& k = containers_[*cl.bound_container];
  k.role = ContainerRole::Releasing;
  --local_bound_;
  ++releasing_;

  auto& job = jobs_[c].emplace();
  job.client = c;
  job.direction = Direction::ToRemote;
  job.trigger = trigger;
  job.step = Step::StateUpload;
  job.container = k.id;
  job.started_at = kernel_.now();
  job.generation = next_generation_++;
  broker_.record(c).buffering = true;
  advance_to_remote(job, false);
}

void Platform::advance_to_remote(TransitionJob& job, bool delay_elapsed) {
  auto& k = containers_[job.container];
  auto& cl = clients_[job.client];
  if (job.step == Step::StateUpload) {
    if (!job.delay_pending) {
      // Drain the session's pending invocations before the state leaves.
      if (!k.idle() || !k.queue.empty()) return;
      if (params_.d_up > 0.0) {
        job.delay_pending = true;
        kernel_.schedule_in(params_.d_up, EventKind::TransitionStep, job.client, job.generation);
        return;
      }
    } else if (!delay_elapsed) {
      return;
    }
    job.delay_pending = false;
    expected_version_[job.client] = state_.upload(cl.session_id, k.loaded_version);
    job.step = Step::Teardown;
  }
  if (job.step == Step::Teardown) {
    --releasing_;
    add_to_pool(k.id);
    cl.bound_container.reset();
    pull_remote_work(k);
    job.step = Step::BrokerUpdate;
  }
  if (job.step == Step::BrokerUpdate) {
    auto& rec = broker_.record(job.client);
    rec.mode = Mode::Remote;
    rec.buffering = false;
    cl.actual_mode = Mode::Remote;
    ++counters_.to_remote;
    auto buffered = std::move(job.buffered);
    finish_job(job);
    // A client that flipped back to Local meanwhile keeps its invocations
    // buffered for the follow-up transition instead of bouncing them remote.
    reconcile(cl.id);
    if (auto& next = jobs_[cl.id]; next && next->direction == Direction::ToLocal) {
      for (const auto& inv : buffered) next->buffered.push_back(inv);
      next->buffered_total += static_cast<std::uint32_t>(buffered.size());
      return;
    }
    waiting_ -= buffered.size();
    for (const auto& inv : buffered) {
      if (cl.actual_mode == Mode::Local) {
        enqueue_local(*cl.bound_container, inv);
      } else {
        enqueue_remote(inv);
      }
    }
  }
}

void Platform::finish_job(TransitionJob& job) {
  transitions_.push_back(TransitionRecord{job.client, job.direction, job.trigger, job.started_at,
                                          kernel_.now(), job.buffered_total});
  jobs_[job.client].reset();
}

void Platform::on_transition_step(ClientId c, std::uint32_t generation) {
  auto& job = jobs_.at(c);
  if (!job || job->generation != generation || !job->delay_pending) return;
  if (job->direction == Direction::ToLocal) {
    advance_to_local(*job, true);
  } else {
    advance_to_remote(*job, true);
  }
}

void Platform::reconcile(ClientId c) {
  if (!admission_ || jobs_[c]) return;
  auto& cl = clients_[c];
  if (cl.preferred_mode == Mode::Local && cl.actual_mode == Mode::Remote) {
    transition_to_local(c, Trigger::App);
  } else if (cl.preferred_mode == Mode::Remote && cl.actual_mode == Mode::Local) {
    transition_to_remote(c, Trigger::App);
  }
}

void Platform::set_preference(ClientId c, Mode preferred) {
  auto& cl = clients_.at(c);
  if (cl.preferred_mode == preferred) return;
  sample_preferences();
  cl.preferred_mode = preferred;
  local_preferring_ += preferred == Mode::Local ? 1 : -1;
  if (preferred == Mode::Local && cl.actual_mode == Mode::Remote && !jobs_[c] && admission_) {
    ++counters_.trigger_attempts;
    if (!transition_to_local(c, Trigger::App)) ++counters_.trigger_denials;
    return;
  }
  reconcile(c);
}

void Platform::on_phase_change(ClientId c) {
  if (!accepting_) return;
  auto& cl = clients_.at(c);
  set_preference(c, cl.preferred_mode == Mode::Local ? Mode::Remote : Mode::Local);
  if (auto next = next_phase_change(cl, params_.phase, kernel_.now())) {
    kernel_.schedule(next->at, EventKind::PhaseChange, c);
  }
}

void Platform::on_network_trigger() {
  if (!accepting_) return;
  const auto c = static_cast<ClientId>(network_stream_.next_u64() % clients_.size());
  if (!jobs_[c]) {
    if (clients_[c].actual_mode == Mode::Remote) {
      transition_to_local(c, Trigger::Network);
    } else {
      transition_to_remote(c, Trigger::Network);
    }
  }
  kernel_.schedule_in(exp_sample(params_.network_trigger_rate, network_stream_), EventKind::NetworkTrigger);
}

// ---------------------------------------------------------------------------
// Measurement

void Platform::sample_preferences() {
  const SimTime now = kernel_.now();
  local_preference_time_ += local_preferring_ * (now - last_pref_sample_);
  last_pref_sample_ = now;
}

void Platform::on_tick() {
  samples_.push_back(QueueSample{kernel_.now(), static_cast<double>(waiting_)});
  if (counters_.generated != counters_.completed + counters_.misroutes + in_system()) {
    ++counters_.conservation_violations;
  }
  if (accepting_) kernel_.schedule_in(params_.horizon / params_.ticks, EventKind::MeasurementTick);
}

bool Platform::check_containers() const {
  int pool = 0;
  int local = 0;
  int reserved = 0;
  int releasing = 0;
  for (const auto& k : containers_) {
    switch (k.role) {
      case ContainerRole::Pool:
        ++pool;
        if (k.session) return false;
        break;
      case ContainerRole::Reserved: ++reserved; break;
      case ContainerRole::Local: {
        ++local;
        if (!k.session) return false;
        const auto& cl = clients_[*k.session];
        if (cl.actual_mode != Mode::Local || cl.bound_container != k.id) return false;
        for (const auto& inv : k.queue) {
          if (inv.client != *k.session) return false;
        }
        break;
      }
      case ContainerRole::Releasing: ++releasing; break;
    }
  }
  if (pool != static_cast<int>(pool_members_.size()) || local != local_bound_ ||
      reserved != reserved_ || releasing != releasing_) {
    return false;
  }
  if (pool + local + reserved + releasing != params_.containers) return false;
  for (const auto& cl : clients_) {
    const auto& rec = broker_.record(cl.id);
    if (!jobs_[cl.id] && (rec.buffering || rec.mode != cl.actual_mode)) return false;
  }
  return true;
}

}  // namespace sfaas
