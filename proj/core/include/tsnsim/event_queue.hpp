#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "tsnsim/time.hpp"

namespace tsnsim {

// One scheduled callback. Events with equal fire_at are delivered in
// ascending insertion sequence, which makes every run reproducible.
struct Event {
  SimTime fire_at;
  std::uint64_t seq = 0;
  std::function<void()> fn;
};

class EventQueue {
 public:
  // Enqueues an event; `now` is the queue owner's current time and events
  // may not be scheduled in the past.
  void schedule(SimTime now, SimTime fire_at, std::function<void()> fn);

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  SimTime next_time() const { return heap_.front().fire_at; }

  Event pop();

  std::uint64_t scheduled_total() const { return next_seq_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  std::vector<Event> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace tsnsim
