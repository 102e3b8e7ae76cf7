#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

namespace sfaas {

// Virtual time in seconds.
using SimTime = double;

enum class EventKind : std::uint8_t {
  InvocationArrival,
  ServiceCompletion,
  PhaseChange,
  TransitionStep,
  MeasurementTick,
  NetworkTrigger,
  Horizon,
};

struct SimEvent {
  SimTime fire_at = 0.0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::Horizon;
  std::uint32_t subject = 0;  // client or container id, depending on kind
  std::uint32_t aux = 0;      // kind-specific (e.g. transition generation)
};

// Handle returned by schedule(); the event's sequence number.
struct EventHandle {
  std::uint64_t sequence = 0;
};

// Single-threaded discrete-event core: virtual clock plus a binary heap keyed
// by (fire_at, sequence). Equal-time events fire in insertion order.
class Kernel {
 public:
  SimTime now() const { return now_; }
  bool empty() const { return heap_.size() == cancelled_.size(); }
  std::size_t pending() const { return heap_.size() - cancelled_.size(); }

  // Throws SimulationFault when `at` is before the current clock.
  EventHandle schedule(SimTime at, EventKind kind, std::uint32_t subject = 0,
                       std::uint32_t aux = 0);
  EventHandle schedule_in(SimTime delay, EventKind kind, std::uint32_t subject = 0,
                          std::uint32_t aux = 0) {
    return schedule(now_ + delay, kind, subject, aux);
  }

  // Returns false if the event already fired or was cancelled. Linear in the
  // number of pending events.
  bool cancel(EventHandle handle);

  // Fire time of the next live event.
  std::optional<SimTime> next_time();

  // Processes every event with fire_at <= horizon, then sets the clock to
  // horizon. Returns the number of events delivered.
  template <class Handler>
  std::size_t run_until(SimTime horizon, Handler&& handler) {
    std::size_t processed = 0;
    while (auto ev = pop_if_due(horizon)) {
      handler(*ev);
      ++processed;
    }
    if (horizon > now_) now_ = horizon;
    return processed;
  }

  // Processes events until the queue is empty or `keep_going()` is false.
  template <class Handler, class Predicate>
  std::size_t run_while(Predicate&& keep_going, Handler&& handler) {
    std::size_t processed = 0;
    while (keep_going()) {
      auto ev = pop_if_due(kForever);
      if (!ev) break;
      handler(*ev);
      ++processed;
    }
    return processed;
  }

 private:
  static constexpr SimTime kForever = 1.0e300;

  std::optional<SimEvent> pop_if_due(SimTime horizon);
  void drop_cancelled_top();

  SimTime now_ = 0.0;
  std::uint64_t next_sequence_ = 0;
  std::vector<SimEvent> heap_;
  std::unordered_set<std::uint64_t> cancelled_;
};

}  // namespace sfaas
