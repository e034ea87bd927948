#include "tsnsim/event_queue.hpp"

#include <algorithm>

namespace tsnsim {

void EventQueue::schedule(SimTime now, SimTime fire_at, std::function<void()> fn) {
  if (fire_at < now) {
    throw SchedulingInPast("event at " + std::to_string(fire_at.count()) + "ns scheduled at t=" +
                           std::to_string(now.count()) + "ns");
  }
  heap_.push_back(Event{fire_at, next_seq_++, std::move(fn)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

Event EventQueue::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), Later{});
  Event ev = std::move(heap_.back());
  heap_.pop_back();
  return ev;
}

}  // namespace tsnsim
