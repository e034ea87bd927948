#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tsnsim {

using DeviceId = std::uint32_t;
using PortId = std::uint32_t;

// Priority Code Point, 0 (low) to 7 (high).
using Pcp = std::uint8_t;
inline constexpr Pcp kNumPriorities = 8;

// 48-bit MAC address stored in the low bits of a 64-bit integer so the
// natural integer order is the lock acquisition order.
class MacAddress {
 public:
  constexpr MacAddress() = default;
  constexpr explicit MacAddress(std::uint64_t value) : value_(value & 0xffff'ffff'ffffULL) {}

  static MacAddress parse(std::string_view text);  // "02:00:00:00:00:01"

  constexpr std::uint64_t value() const { return value_; }
  constexpr auto operator<=>(const MacAddress&) const = default;

  std::string to_string() const;

 private:
  std::uint64_t value_ = 0;
};

}  // namespace tsnsim
