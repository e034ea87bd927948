#pragma once

#include <map>
#include <string>
#include <vector>

#include "tsnsim/gcl.hpp"
#include "tsnsim/netconf_messages.hpp"
#include "tsnsim/scenario.hpp"

namespace tsnsim {

// TDMA slot layout for the scenario's real-time flows.
//
// Every flow owns one sub-slot per cycle, identified by its slot_index.
// Generators fire at the sub-slot phase on their local clock; each egress
// port on the path opens the gate exactly when the frames arrive there,
// shifted by the accumulated store-and-forward pipeline delay. Two slack
// terms absorb the bounded clock disagreement between neighbouring devices
// so that steady-state latencies stay exact for every clock-offset draw:
// gates open `lead = 2 * sync_bound` early, and consecutive sub-slots are
// spaced `pitch = sub_slot + 2 * sync_bound` apart.
//
// Widening rule: admitting the flow with slot index k extends a port's
// open interval to `base + k * pitch + sub_slot + slot_margin`; a guard
// band (all gates closed) sits immediately before the opening edge.
class ScheduleTemplate {
 public:
  explicit ScheduleTemplate(const Scenario& scenario);

  SimTime cycle() const { return cycle_; }
  SimTime sub_slot() const { return sub_slot_; }
  SimTime pitch() const { return pitch_; }
  SimTime lead() const { return lead_; }

  // Phase of the flow's frame creation within the cycle (local clock).
  SimTime generator_phase(const std::string& flow) const;

  // Egress ports of the switches along a flow's path.
  struct Hop {
    std::string device;   // switch name
    PortId port;          // egress port on that switch
    SimTime arrival_phase;  // nominal arrival phase of this flow's frames
  };
  const std::vector<Hop>& switch_hops(const std::string& flow) const;

  // Gate control list for a switch egress port once every flow crossing it
  // with slot_index <= max_slot_index has been admitted.
  GateControlList switch_port_gcl(const std::string& device, PortId port, int max_slot_index) const;

  // Static gate control list for a sending end station.
  GateControlList end_station_gcl(const std::string& device) const;

  // Flow-rule installation for one switch on the flow's path.
  Changeset rules_changeset(const std::string& device, const std::string& flow) const;

  // Gate widening for every port of `device` crossed by `flow`.
  Changeset gcl_changeset(const std::string& device, const std::string& flow) const;

  // Analytic end-to-end latency of a flow in an uncongested schedule:
  // sum of per-hop transmission, propagation and forwarding delays.
  SimTime analytic_latency(const std::string& flow) const;

 private:
  struct PortKey {
    std::string device;
    PortId port;
    auto operator<=>(const PortKey&) const = default;
  };
  struct PortInfo {
    SimTime base;           // nominal arrival phase of slot index 0
    std::uint8_t rt_mask = 0;
    std::vector<std::string> flows;  // flows crossing this port
  };

  SimTime wrap(SimTime phase) const {
    std::int64_t v = phase.count() % cycle_.count();
    if (v < 0) v += cycle_.count();
    return SimTime::ns(v);
  }

  const Scenario& scenario_;
  SimTime cycle_;
  SimTime sub_slot_;
  SimTime pitch_;
  SimTime lead_;
  std::map<std::string, SimTime> phases_;
  std::map<std::string, std::vector<Hop>> hops_;
  std::map<std::string, SimTime> analytic_;
  std::map<PortKey, PortInfo> ports_;
  std::map<std::string, std::uint8_t> station_masks_;
  std::map<std::string, std::vector<std::string>> station_flows_;
};

// Builds a GCL whose open windows are `slots` (start phase, open length)
// with `rt_mask` gates open inside, a guard band of all-closed gates
// immediately before each window, and the complement mask elsewhere.
GateControlList build_slot_gcl(SimTime cycle, const std::vector<std::pair<SimTime, SimTime>>& slots,
                               SimTime guard, std::uint8_t rt_mask);

// One scheduled reconfiguration round.
struct UpdateStep {
  std::string device;
  Changeset changes;
};
struct ScriptEntry {
  std::string label;
  SimTime trigger;
  bool transactional = false;
  std::vector<UpdateStep> steps;
  std::vector<std::string> participants;  // transactional mode: all switches
};

// Expands the scenario's admissions into T1..Tn (transactional mode) or
// U1..U2n (non-transactional mode).
std::vector<ScriptEntry> build_update_script(const Scenario& scenario, const ScheduleTemplate& tmpl);

}  // namespace tsnsim
