#include "tsnsim/device_config.hpp"

#include <sstream>

namespace tsnsim {

std::optional<std::string> DeviceConfig::validate(std::size_t port_count) const {
  for (const auto& [port, gcl] : gcls) {
    if (port >= port_count) {
      return "GCL references unknown port " + std::to_string(port);
    }
    if (auto err = gcl.validate()) {
      return "GCL on port " + std::to_string(port) + ": " + *err;
    }
  }
  for (const FlowEntry& e : flow_table.entries()) {
    if (const auto* fwd = std::get_if<ForwardAction>(&e.action)) {
      if (fwd->port >= port_count) {
        return "flow entry forwards to unknown port " + std::to_string(fwd->port);
      }
    }
    if (e.match.pcp && *e.match.pcp >= kNumPriorities) {
      return "flow entry matches invalid pcp";
    }
  }
  return std::nullopt;
}

std::string DeviceConfig::canonical_string() const {
  std::ostringstream out;
  out << "flow_table[";
  for (const FlowEntry& e : flow_table.entries()) {
    out << "{";
    out << (e.match.dst_mac ? e.match.dst_mac->to_string() : "*") << ",";
    if (e.match.vlan_id) out << *e.match.vlan_id; else out << "*";
    out << ",";
    if (e.match.pcp) out << static_cast<int>(*e.match.pcp); else out << "*";
    out << "->";
    if (const auto* fwd = std::get_if<ForwardAction>(&e.action)) {
      out << "fwd:" << fwd->port;
    } else {
      out << "drop";
    }
    out << "}";
  }
  out << "] gcls[";
  for (const auto& [port, gcl] : gcls) {
    out << port << ":{cycle=" << gcl.cycle_duration().count() << ",base=" << gcl.base_offset().count();
    for (const GclEntry& e : gcl.entries()) {
      out << ",(" << e.duration.count() << "," << static_cast<int>(e.gate_states) << ")";
    }
    out << "}";
  }
  out << "]";
  return out.str();
}

}  // namespace tsnsim
