#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "tsnsim/frame.hpp"
#include "tsnsim/ids.hpp"

namespace tsnsim {

// Layer-2 match: every field is either a concrete value or a wildcard.
struct FlowMatch {
  std::optional<MacAddress> dst_mac;
  std::optional<std::uint16_t> vlan_id;
  std::optional<Pcp> pcp;

  bool matches(const Frame& f) const {
    if (dst_mac && *dst_mac != f.dst_mac) return false;
    if (vlan_id && *vlan_id != f.vlan_id) return false;
    if (pcp && *pcp != f.pcp) return false;
    return true;
  }

  bool operator==(const FlowMatch&) const = default;
};

struct ForwardAction {
  PortId port;
  bool operator==(const ForwardAction&) const = default;
};
struct DropAction {
  bool operator==(const DropAction&) const = default;
};
using FlowAction = std::variant<ForwardAction, DropAction>;

struct FlowEntry {
  FlowMatch match;
  FlowAction action;
  bool operator==(const FlowEntry&) const = default;
};

// Ordered match -> action rules; the first matching entry wins and a frame
// matching no entry is dropped by the caller.
class FlowTable {
 public:
  std::vector<FlowEntry>& entries() { return entries_; }
  const std::vector<FlowEntry>& entries() const { return entries_; }

  // First matching entry, or nullopt (default deny).
  std::optional<FlowAction> lookup(const Frame& f) const {
    for (const FlowEntry& e : entries_) {
      if (e.match.matches(f)) return e.action;
    }
    return std::nullopt;
  }

  bool operator==(const FlowTable&) const = default;

 private:
  std::vector<FlowEntry> entries_;
};

}  // namespace tsnsim
