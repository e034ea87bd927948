#pragma once

#include <cstdint>
#include <string>

#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

// L2 framing overhead for a VLAN-tagged frame: 6+6 MAC addresses, 4-byte
// Q-tag, 2-byte ethertype, 4-byte FCS.
inline constexpr std::int64_t kVlanFramingOverhead = 22;
inline constexpr std::int64_t kMinFramingBytes = 64;
inline constexpr std::int64_t kMaxVlanFramingBytes = 1522;
inline constexpr std::int64_t kPreambleBytes = 8;

// A tagged Ethernet frame travelling through the simulated network.
struct Frame {
  MacAddress src_mac;
  MacAddress dst_mac;
  std::uint16_t vlan_id = 0;  // 12-bit
  Pcp pcp = 0;
  std::int64_t payload_size = 0;  // user payload bytes
  std::string flow_id;
  SimTime created_at;
  SimTime received_at;

  // Frame size on the medium excluding the preamble.
  std::int64_t framing_size() const {
    std::int64_t s = payload_size + kVlanFramingOverhead;
    return s < kMinFramingBytes ? kMinFramingBytes : s;
  }

  // Bytes that occupy the wire per transmission: framing plus preamble.
  std::int64_t on_wire_size() const { return framing_size() + kPreambleBytes; }
};

// A physical link: transmission rate, cable length and propagation speed.
struct Link {
  std::int64_t speed_bps = 100'000'000;
  std::int64_t length_m = 10;
  std::int64_t propagation_ns_per_m = 5;

  SimTime propagation_delay() const { return SimTime::ns(length_m * propagation_ns_per_m); }

  SimTime transmission_duration(std::int64_t on_wire_bytes) const {
    return SimTime::ns(on_wire_bytes * 8 * 1'000'000'000 / speed_bps);
  }
  SimTime transmission_duration(const Frame& f) const {
    return transmission_duration(f.on_wire_size());
  }
};

}  // namespace tsnsim
