#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsnsim {

// Simulation time in integer nanoseconds. All time arithmetic in the
// simulator is exact; there is no floating point anywhere on the time axis.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime ns(std::int64_t v) { return SimTime{v}; }
  static constexpr SimTime us(std::int64_t v) { return SimTime{v * 1'000}; }
  static constexpr SimTime ms(std::int64_t v) { return SimTime{v * 1'000'000}; }
  static constexpr SimTime sec(std::int64_t v) { return SimTime{v * 1'000'000'000}; }

  constexpr std::int64_t count() const { return ns_; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime o) const { return SimTime{ns_ + o.ns_}; }
  constexpr SimTime operator-(SimTime o) const { return SimTime{ns_ - o.ns_}; }
  constexpr SimTime operator*(std::int64_t k) const { return SimTime{ns_ * k}; }
  constexpr SimTime operator/(std::int64_t k) const { return SimTime{ns_ / k}; }
  constexpr SimTime operator%(SimTime o) const { return SimTime{ns_ % o.ns_}; }
  constexpr SimTime& operator+=(SimTime o) { ns_ += o.ns_; return *this; }
  constexpr SimTime& operator-=(SimTime o) { ns_ -= o.ns_; return *this; }

 private:
  constexpr explicit SimTime(std::int64_t v) : ns_(v) {}
  std::int64_t ns_ = 0;
};

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchedulingInPast : SimError {
  using SimError::SimError;
};

struct UnknownDevice : SimError {
  using SimError::SimError;
};

// Parses a duration with an explicit unit suffix: "500ns", "10us", "1ms",
// "2s". Plain integers are rejected so scenario files can never be
// misread by an order of magnitude.
SimTime parse_duration(std::string_view text);

// Renders a time as decimal seconds with exactly nine fractional digits,
// e.g. 373350 ns -> "0.000373350". Used for the latency CSV columns.
std::string format_seconds(SimTime t);

// Renders a duration in the shortest exact unit ("1ms", "122400ns").
std::string format_duration(SimTime t);

}  // namespace tsnsim
