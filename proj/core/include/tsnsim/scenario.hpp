#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

enum class RunMode : std::uint8_t { Transactional, NonTransactional };

const char* mode_name(RunMode m);
RunMode parse_mode(std::string_view text);  // "transactional" | "non-transactional"

struct DeviceSpec {
  enum class Kind : std::uint8_t { EndStation, Switch } kind = Kind::EndStation;
  std::string name;
  MacAddress mac;
  SimTime forwarding_delay;  // switches only
};

struct LinkSpec {
  std::string a;
  std::string b;
  std::int64_t speed_bps = 100'000'000;
  std::int64_t length_m = 10;
  std::int64_t propagation_ns_per_m = 5;
};

struct FlowSpec {
  std::string id;
  std::string sender;
  std::string receiver;
  Pcp pcp = 7;
  std::int64_t payload_bytes = 1500;
  SimTime period = SimTime::ms(1);
  SimTime start_offset;
  std::uint16_t vlan = 1;
  int slot_index = 0;  // position of this flow's sub-slot in the TDMA cycle
};

// One flow admission: when its forwarding rules are installed and when the
// gate schedules are widened. In transactional mode both become one
// transaction triggered at rules_at; in non-transactional mode they are two
// independent direct update rounds.
struct AdmissionSpec {
  std::string flow;
  SimTime rules_at;
  SimTime schedule_at;
};

struct ControlParams {
  SimTime d_ctrl_min = SimTime::us(50);
  SimTime d_ctrl_max = SimTime::us(250);
  SimTime p_proc = SimTime::us(10);
  SimTime apply_margin = SimTime::us(10);
  SimTime phase_timeout = SimTime::ms(10);
};

struct ScheduleParams {
  SimTime cycle = SimTime::ms(1);
  SimTime slot_margin = SimTime::us(1);
  SimTime guard_band = SimTime::ns(122'400);
  bool align_commit_to_period = true;
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  RunMode mode = RunMode::Transactional;
  SimTime sim_end = SimTime::ms(500);
  SimTime record_start = SimTime::ms(50);
  SimTime sync_bound = SimTime::ns(500);
  SimTime tolerance = SimTime::us(1);  // latency violation tolerance
  ControlParams control;
  ScheduleParams schedule;
  std::vector<DeviceSpec> devices;
  std::vector<LinkSpec> links;
  std::vector<FlowSpec> flows;
  std::vector<AdmissionSpec> admissions;

  const DeviceSpec* device(const std::string& name) const;
  const FlowSpec* flow(const std::string& id) const;

  // All structural checks; empty when the scenario is runnable.
  std::vector<std::string> validate() const;
};

struct ScenarioError : SimError {
  explicit ScenarioError(std::vector<std::string> problems);
  std::vector<std::string> issues;
};

// Scenario text format; see README for the syntax.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);
std::string serialize_scenario(const Scenario& s);

}  // namespace tsnsim
