#include "sfaas/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfaas/errors.hpp"

namespace sfaas {

namespace {

// Min-heap order for std::push_heap/pop_heap.
struct Later {
  bool operator()(const SimEvent& a, const SimEvent& b) const {
    if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
    return a.sequence > b.sequence;
  }
};

}  // namespace

EventHandle Kernel::schedule(SimTime at, EventKind kind, std::uint32_t subject,
                             std::uint32_t aux) {
  if (!(at >= now_) || !std::isfinite(at)) {
    throw SimulationFault("event scheduled in the past or at non-finite time: at=" +
                          std::to_string(at) + " now=" + std::to_string(now_));
  }
  const std::uint64_t seq = next_sequence_++;
  heap_.push_back(SimEvent{at, seq, kind, subject, aux});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return EventHandle{seq};
}

bool Kernel::cancel(EventHandle handle) {
  if (cancelled_.contains(handle.sequence)) return false;
  const bool pending = std::any_of(heap_.begin(), heap_.end(), [&](const SimEvent& e) {
    return e.sequence == handle.sequence;
  });
  if (!pending) return false;
  cancelled_.insert(handle.sequence);
  return true;
}

void Kernel::drop_cancelled_top() {
  while (!heap_.empty() && !cancelled_.empty() && cancelled_.contains(heap_.front().sequence)) {
    cancelled_.erase(heap_.front().sequence);
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    heap_.pop_back();
  }
}

std::optional<SimTime> Kernel::next_time() {
  drop_cancelled_top();
  if (heap_.empty()) return std::nullopt;
  return heap_.front().fire_at;
}

std::optional<SimEvent> Kernel::pop_if_due(SimTime horizon) {
  drop_cancelled_top();
  if (heap_.empty() || heap_.front().fire_at > horizon) return std::nullopt;
  std::pop_heap(heap_.begin(), heap_.end(), Later{});
  SimEvent ev = heap_.back();
  heap_.pop_back();
  now_ = ev.fire_at;
  return ev;
}

}  // namespace sfaas
