#include "tsnsim/gcl.hpp"

namespace tsnsim {

std::optional<std::string> GateControlList::validate() const {
  if (cycle_ <= SimTime::ns(0)) {
    return "cycle_duration must be positive";
  }
  if (entries_.empty()) {
    return "entries must be non-empty";
  }
  SimTime sum;
  for (const GclEntry& e : entries_) {
    if (e.duration <= SimTime::ns(0)) {
      return "entry durations must be positive";
    }
    sum += e.duration;
  }
  if (sum != cycle_) {
    return "entry durations sum to " + std::to_string(sum.count()) + "ns, expected cycle " +
           std::to_string(cycle_.count()) + "ns";
  }
  return std::nullopt;
}

SimTime GateControlList::phase_of(SimTime t_local) const {
  std::int64_t rel = (t_local - base_offset_).count() % cycle_.count();
  if (rel < 0) rel += cycle_.count();
  return SimTime::ns(rel);
}

GateState GateControlList::gate_state_at(Pcp pcp, SimTime t_local) const {
  SimTime phase = phase_of(t_local);
  SimTime cursor;
  for (const GclEntry& e : entries_) {
    cursor += e.duration;
    if (phase < cursor) {
      return (e.gate_states >> pcp) & 1 ? GateState::Open : GateState::Closed;
    }
  }
  // Unreachable for a valid list; treat as closed.
  return GateState::Closed;
}

SimTime GateControlList::open_run_remaining(Pcp pcp, SimTime t_local) const {
  SimTime phase = phase_of(t_local);
  // Locate the containing entry.
  std::size_t idx = 0;
  SimTime start;
  for (; idx < entries_.size(); ++idx) {
    if (phase < start + entries_[idx].duration) break;
    start += entries_[idx].duration;
  }
  if (idx == entries_.size()) return SimTime::ns(0);
  if (!((entries_[idx].gate_states >> pcp) & 1)) return SimTime::ns(0);

  SimTime run = start + entries_[idx].duration - phase;
  // Extend across subsequent open entries, wrapping at most one full cycle.
  std::size_t j = (idx + 1) % entries_.size();
  while (run < cycle_ && ((entries_[j].gate_states >> pcp) & 1)) {
    run += entries_[j].duration;
    j = (j + 1) % entries_.size();
    if (j == (idx + 1) % entries_.size()) break;  // looped all the way around
  }
  return run > cycle_ ? cycle_ : run;
}

std::optional<SimTime> GateControlList::earliest_fit(Pcp pcp, SimTime tx_duration, SimTime t_from) const {
  if (!is_valid()) return std::nullopt;
  SimTime cursor = t_from;
  // Two full cycles are enough to visit every open run including the one
  // wrapping the cycle boundary.
  for (std::size_t guard = 0; guard < 2 * entries_.size() + 2; ++guard) {
    SimTime run = open_run_remaining(pcp, cursor);
    if (run >= cycle_ || run >= tx_duration) {
      if (run > SimTime::ns(0)) return cursor;
    }
    // Advance: skip the (possibly empty) open run, then the closed stretch.
    SimTime phase = phase_of(cursor + run);
    SimTime step = run;
    SimTime entry_start;
    std::size_t idx = 0;
    for (; idx < entries_.size(); ++idx) {
      if (phase < entry_start + entries_[idx].duration) break;
      entry_start += entries_[idx].duration;
    }
    if (idx == entries_.size()) return std::nullopt;
    // Walk closed entries to the next open start.
    SimTime advance = entry_start + entries_[idx].duration - phase;
    std::size_t j = (idx + 1) % entries_.size();
    std::size_t walked = 0;
    while (!((entries_[j].gate_states >> pcp) & 1) && walked < entries_.size()) {
      advance += entries_[j].duration;
      j = (j + 1) % entries_.size();
      ++walked;
    }
    if (walked == entries_.size()) return std::nullopt;  // gate never opens
    cursor += step + advance;
  }
  return std::nullopt;
}

}  // namespace tsnsim
