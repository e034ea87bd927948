#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "tsnsim/event_queue.hpp"
#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

// Deterministic discrete-event engine. The kernel is the single time
// authority; everything else interacts only through scheduled events.
// It also owns the per-device clock model: each registered device has a
// constant signed offset from global time, bounded by sync_bound.
class Kernel {
 public:
  explicit Kernel(SimTime sync_bound = SimTime::ns(500)) : sync_bound_(sync_bound) {}

  SimTime now() const { return now_; }
  SimTime sync_bound() const { return sync_bound_; }

  void schedule_at(SimTime fire_at, std::function<void()> fn) {
    queue_.schedule(now_, fire_at, std::move(fn));
  }
  void schedule_after(SimTime delay, std::function<void()> fn) {
    schedule_at(now_ + delay, std::move(fn));
  }

  // Processes every event with fire_at <= t_end in (time, seq) order and
  // leaves the global clock at t_end.
  void run_until(SimTime t_end);

  // ---- clock model ----

  // Registers a device clock; |offset_ns| must not exceed sync_bound.
  void register_clock(DeviceId device, std::int64_t offset_ns);

  // Local reading of the global clock, clamped at zero.
  SimTime local_time(DeviceId device) const;

  // Global instant at which the device's local clock reads t_local.
  // A timer set for local time T fires at this global instant.
  SimTime local_to_global(DeviceId device, SimTime t_local) const;

  std::int64_t clock_offset(DeviceId device) const;

  // Schedules fn at the instant the device's local clock reads t_local.
  void schedule_at_local(DeviceId device, SimTime t_local, std::function<void()> fn) {
    schedule_at(local_to_global(device, t_local), std::move(fn));
  }

  std::uint64_t events_processed() const { return events_processed_; }

 private:
  SimTime now_;
  SimTime sync_bound_;
  EventQueue queue_;
  std::map<DeviceId, std::int64_t> offsets_;
  std::uint64_t events_processed_ = 0;
};

}  // namespace tsnsim
