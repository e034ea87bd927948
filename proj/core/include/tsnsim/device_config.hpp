#pragma once

#include <map>
#include <optional>
#include <string>

#include "tsnsim/flow_table.hpp"
#include "tsnsim/gcl.hpp"

namespace tsnsim {

// The reconfigurable state of one switch: its forwarding rules and the
// gate control list of each egress port.
struct DeviceConfig {
  FlowTable flow_table;
  std::map<PortId, GateControlList> gcls;

  const GateControlList* gcl_for(PortId port) const {
    auto it = gcls.find(port);
    return it == gcls.end() ? nullptr : &it->second;
  }

  // Structural validity: all GCLs valid, every forward action references an
  // existing port (port ids below port_count).
  std::optional<std::string> validate(std::size_t port_count) const;

  // Stable textual form used for bit-for-bit comparisons in rollback and
  // equivalence checks.
  std::string canonical_string() const;

  bool operator==(const DeviceConfig&) const = default;
};

}  // namespace tsnsim
