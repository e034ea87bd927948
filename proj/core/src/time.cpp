#include "tsnsim/time.hpp"

#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>

#include "tsnsim/ids.hpp"

namespace tsnsim {

SimTime parse_duration(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || (i == 0 && text[i] == '-'))) {
    ++i;
  }
  if (i == 0) {
    throw SimError("bad duration '" + std::string(text) + "': expected digits");
  }
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + i, value);
  if (ec != std::errc{} || ptr != text.data() + i) {
    throw SimError("bad duration '" + std::string(text) + "'");
  }
  std::string_view unit = text.substr(i);
  if (unit == "ns") return SimTime::ns(value);
  if (unit == "us") return SimTime::us(value);
  if (unit == "ms") return SimTime::ms(value);
  if (unit == "s") return SimTime::sec(value);
  throw SimError("bad duration '" + std::string(text) + "': unit must be ns, us, ms or s");
}

std::string format_seconds(SimTime t) {
  std::int64_t ns = t.count();
  char sign[2] = "";
  if (ns < 0) {
    sign[0] = '-';
    ns = -ns;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%" PRId64 ".%09" PRId64, sign, ns / 1'000'000'000, ns % 1'000'000'000);
  return buf;
}

std::string format_duration(SimTime t) {
  std::int64_t ns = t.count();
  const char* unit = "ns";
  std::int64_t v = ns;
  if (ns != 0) {
    if (ns % 1'000'000'000 == 0) {
      v = ns / 1'000'000'000;
      unit = "s";
    } else if (ns % 1'000'000 == 0) {
      v = ns / 1'000'000;
      unit = "ms";
    } else if (ns % 1'000 == 0) {
      v = ns / 1'000;
      unit = "us";
    }
  }
  return std::to_string(v) + unit;
}

MacAddress MacAddress::parse(std::string_view text) {
  std::uint64_t value = 0;
  int bytes = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    auto hex = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    if (i + 1 >= text.size()) break;
    int hi = hex(text[i]);
    int lo = hex(text[i + 1]);
    if (hi < 0 || lo < 0) break;
    value = (value << 8) | static_cast<std::uint64_t>(hi * 16 + lo);
    ++bytes;
    i += 2;
    if (i < text.size() && text[i] == ':') ++i;
  }
  if (bytes != 6 || i != text.size()) {
    throw SimError("bad MAC address '" + std::string(text) + "'");
  }
  return MacAddress(value);
}

std::string MacAddress::to_string() const {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x",
                static_cast<unsigned>((value_ >> 40) & 0xff), static_cast<unsigned>((value_ >> 32) & 0xff),
                static_cast<unsigned>((value_ >> 24) & 0xff), static_cast<unsigned>((value_ >> 16) & 0xff),
                static_cast<unsigned>((value_ >> 8) & 0xff), static_cast<unsigned>(value_ & 0xff));
  return buf;
}

}  // namespace tsnsim
