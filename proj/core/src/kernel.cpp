#include "tsnsim/kernel.hpp"

#include <cstdlib>

namespace tsnsim {

void Kernel::run_until(SimTime t_end) {
  while (!queue_.empty() && queue_.next_time() <= t_end) {
    Event ev = queue_.pop();
    now_ = ev.fire_at;
    ++events_processed_;
    ev.fn();
  }
  if (t_end > now_) {
    now_ = t_end;
  }
}

void Kernel::register_clock(DeviceId device, std::int64_t offset_ns) {
  if (std::abs(offset_ns) > sync_bound_.count()) {
    throw SimError("clock offset " + std::to_string(offset_ns) + "ns exceeds sync bound " +
                   std::to_string(sync_bound_.count()) + "ns");
  }
  offsets_[device] = offset_ns;
}

std::int64_t Kernel::clock_offset(DeviceId device) const {
  auto it = offsets_.find(device);
  if (it == offsets_.end()) {
    throw UnknownDevice("device " + std::to_string(device) + " has no registered clock");
  }
  return it->second;
}

SimTime Kernel::local_time(DeviceId device) const {
  std::int64_t local = now_.count() + clock_offset(device);
  return SimTime::ns(local < 0 ? 0 : local);
}

SimTime Kernel::local_to_global(DeviceId device, SimTime t_local) const {
  std::int64_t global = t_local.count() - clock_offset(device);
  return SimTime::ns(global < 0 ? 0 : global);
}

}  // namespace tsnsim
