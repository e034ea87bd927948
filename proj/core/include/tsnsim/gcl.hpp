#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

// One interval of a gate control list. Bit p of gate_states is the gate of
// priority p: 1 = OPEN, 0 = CLOSED.
struct GclEntry {
  SimTime duration;
  std::uint8_t gate_states = 0xff;

  bool operator==(const GclEntry&) const = default;
};

inline constexpr std::uint8_t kAllGatesOpen = 0xff;
inline constexpr std::uint8_t kAllGatesClosed = 0x00;

enum class GateState : std::uint8_t { Closed = 0, Open = 1 };

// Cyclic timed program of per-priority gate states (802.1Qbv style).
// Entry durations must sum to exactly cycle_duration.
class GateControlList {
 public:
  GateControlList() = default;
  GateControlList(SimTime cycle, SimTime base_offset, std::vector<GclEntry> entries)
      : cycle_(cycle), base_offset_(base_offset), entries_(std::move(entries)) {}

  static GateControlList all_open(SimTime cycle) {
    return GateControlList(cycle, SimTime::ns(0), {GclEntry{cycle, kAllGatesOpen}});
  }

  SimTime cycle_duration() const { return cycle_; }
  SimTime base_offset() const { return base_offset_; }
  const std::vector<GclEntry>& entries() const { return entries_; }

  // Structural validity: positive cycle, non-empty entries summing to the
  // cycle. Returns a diagnostic instead of throwing so edits can be
  // rejected without unwinding.
  std::optional<std::string> validate() const;
  bool is_valid() const { return !validate().has_value(); }

  GateState gate_state_at(Pcp pcp, SimTime t_local) const;
  bool is_open(Pcp pcp, SimTime t_local) const {
    return gate_state_at(pcp, t_local) == GateState::Open;
  }

  // Earliest local instant >= t_from at which a transmission of tx_duration
  // can start and finish without crossing a close of gate `pcp`. Returns
  // nullopt when the gate never offers a long enough open run.
  std::optional<SimTime> earliest_fit(Pcp pcp, SimTime tx_duration, SimTime t_from) const;

  // Open time remaining from t_local until gate `pcp` next closes; the full
  // cycle is returned when the gate never closes.
  SimTime open_run_remaining(Pcp pcp, SimTime t_local) const;

  bool operator==(const GateControlList&) const = default;

 private:
  // Phase of t within the cycle, relative to base_offset.
  SimTime phase_of(SimTime t_local) const;

  SimTime cycle_;
  SimTime base_offset_;
  std::vector<GclEntry> entries_;
};

}  // namespace tsnsim
