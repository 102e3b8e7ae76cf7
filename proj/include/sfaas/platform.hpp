#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <vector>

#include "sfaas/domain.hpp"
#include "sfaas/kernel.hpp"
#include "sfaas/metrics.hpp"
#include "sfaas/policies.hpp"
#include "sfaas/workload.hpp"

namespace sfaas {

// How remote invocations reach pool containers.
enum class Dispatch : std::uint8_t {
  SharedFifo,          // one FIFO for the whole pool (M/M/c)
  PerContainerRandom,  // uniform random container, per-container FIFO
};

struct PlatformParams {
  int clients = 50;
  int containers = 40;
  int nodes = 1;  // edge nodes are labels on containers
  FunctionType function;
  double arrival_rate = 4.5 / 60.0;  // per client, per second
  double d_down = 0.0;               // state download delay, seconds
  double d_up = 0.0;                 // state upload delay, seconds
  SplitPolicy policy = StaticSplit{0};
  PhaseProcess phase;  // used with AdmissionOnDemand
  PhaseChain chain = PhaseChain::Continuous;
  Dispatch dispatch = Dispatch::SharedFifo;
  bool retry_denied = true;               // re-check admission at each invocation
  double network_trigger_rate = 0.0;      // platform-initiated transitions per second
  SimTime horizon = 2.0e5;
  SimTime warmup = 2.0e4;
  int ticks = 400;                        // measurement ticks over the horizon
  bool drain = false;                     // stop arrivals at horizon and empty the system
  bool check_invariants = false;          // verify conservation after every event

  // Throws ConfigError on inconsistent values.
  void validate() const;
};

enum class Step : std::uint8_t {
  ResourceCheck,
  ContainerSetup,
  StateDownload,
  StateUpload,
  Teardown,
  BrokerUpdate,
};

// An in-flight remote<->local transition of one client.
struct TransitionJob {
  ClientId client = 0;
  Direction direction = Direction::ToLocal;
  Trigger trigger = Trigger::App;
  Step step = Step::ResourceCheck;
  ContainerId container = 0;
  std::deque<Invocation> buffered;
  SimTime started_at = 0.0;
  std::uint32_t generation = 0;  // matches TransitionStep events to this job
  bool delay_pending = false;
  std::uint32_t buffered_total = 0;
};

struct PlatformCounters {
  std::uint64_t generated = 0;
  std::uint64_t completed = 0;
  std::uint64_t misroutes = 0;
  std::uint64_t to_local = 0;    // completed transitions
  std::uint64_t to_remote = 0;
  std::uint64_t trigger_attempts = 0;  // application triggers at phase changes
  std::uint64_t trigger_denials = 0;
  std::uint64_t retry_attempts = 0;    // re-checks at invocation arrival
  std::uint64_t retry_denials = 0;
  std::uint64_t network_denials = 0;
  std::uint64_t conservation_violations = 0;
  std::uint64_t invariant_violations = 0;
  std::uint64_t version_violations = 0;
  std::uint64_t events = 0;
};

struct RunResult {
  RunSummary summary;
  PlatformCounters counters;
  std::vector<LatencyRecord> records;
  std::vector<TransitionRecord> transitions;
  std::vector<QueueSample> queue_samples;
  std::uint64_t in_system_at_end = 0;
  double local_preference_time = 0.0;  // client-seconds spent preferring Local
  double observed_time = 0.0;          // client-seconds observed
};

// The FaaS platform as a deterministic state machine over kernel events: a
// shared remote pool, dedicated local containers, a broker, and the
// remote<->local transition protocol.
class Platform {
 public:
  Platform(PlatformParams params, std::uint64_t seed);

  // Whole replication: setup, run to horizon, optional drain, summary.
  RunResult run();

  // Fine-grained control (tests, tools).
  void start();
  void run_until(SimTime t);
  void drain();
  RunResult finish();

  // An invocation from `client` arriving at `at` outside the Poisson stream.
  void schedule_invocation(ClientId client, SimTime at);

  // Transition entry points. transition_to_local returns false on denial.
  // `forced` bypasses the admission rule (still needs a pool container).
  bool transition_to_local(ClientId client, Trigger trigger, bool forced = false);
  void transition_to_remote(ClientId client, Trigger trigger);

  // Sets the preference and reconciles as an application trigger would.
  void set_preference(ClientId client, Mode preferred);

  SimTime now() const { return kernel_.now(); }
  const PlatformParams& params() const { return params_; }
  const ClientState& client(ClientId c) const { return clients_.at(c); }
  const Container& container(ContainerId id) const { return containers_.at(id); }
  const BrokerTable& broker() const { return broker_; }
  const ExternalStateService& state_service() const { return state_; }
  const PlatformCounters& counters() const { return counters_; }
  const std::vector<LatencyRecord>& records() const { return records_; }
  const std::vector<TransitionRecord>& transitions() const { return transitions_; }
  const std::optional<TransitionJob>& job(ClientId c) const { return jobs_.at(c); }
  std::size_t shared_queue_length() const { return shared_queue_.size(); }
  std::size_t pool_size() const { return pool_members_.size(); }
  int local_bound() const { return local_bound_; }
  int mid_transition() const { return reserved_ + releasing_; }
  std::uint64_t in_system() const { return waiting_ + in_service_; }

  // Recounts containers and checks ownership invariants; true when consistent.
  bool check_containers() const;

 private:
  void handle(const SimEvent& ev);
  void on_arrival(const SimEvent& ev);
  void on_completion(ContainerId cid);
  void on_phase_change(ClientId c);
  void on_transition_step(ClientId c, std::uint32_t generation);
  void on_tick();
  void on_network_trigger();

  void dispatch(const Invocation& inv);
  void enqueue_remote(const Invocation& inv, bool count_outstanding = true);
  void enqueue_local(ContainerId cid, const Invocation& inv);
  void start_service(Container& k, const Invocation& inv);
  void pull_remote_work(Container& k);
  void reconcile(ClientId c);
  std::optional<ContainerId> pick_pool_container() const;
  void add_to_pool(ContainerId cid);
  void remove_from_pool(ContainerId cid);
  void advance_to_local(TransitionJob& job, bool delay_elapsed);
  void advance_to_remote(TransitionJob& job, bool delay_elapsed);
  void finish_job(TransitionJob& job);
  void sample_preferences();

  PlatformParams params_;
  std::uint64_t seed_;
  Kernel kernel_;
  std::vector<ClientState> clients_;
  std::vector<Container> containers_;
  std::vector<double> current_service_;  // draw of the invocation in service, per container
  std::vector<std::optional<TransitionJob>> jobs_;
  std::vector<std::uint64_t> expected_version_;
  BrokerTable broker_;
  ExternalStateService state_;
  RngStream dispatch_stream_;
  RngStream network_stream_;
  PhaseRates per_invocation_;

  std::deque<Invocation> shared_queue_;
  std::set<ContainerId> idle_pool_;
  std::vector<ContainerId> pool_members_;
  std::vector<std::int64_t> pool_slot_;  // index into pool_members_, -1 if absent
  int local_bound_ = 0;
  int reserved_ = 0;
  int releasing_ = 0;
  std::uint64_t waiting_ = 0;
  std::uint64_t in_service_ = 0;
  std::uint32_t next_generation_ = 1;

  bool accepting_ = true;
  bool started_ = false;
  bool admission_ = false;
  SimTime last_pref_sample_ = 0.0;
  int local_preferring_ = 0;
  double local_preference_time_ = 0.0;

  PlatformCounters counters_;
  std::vector<LatencyRecord> records_;
  std::vector<TransitionRecord> transitions_;
  std::vector<QueueSample> samples_;
};

}  // namespace sfaas
