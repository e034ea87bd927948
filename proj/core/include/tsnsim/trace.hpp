#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tsnsim/device_config.hpp"
#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

struct LatencySample {
  SimTime recv_time;  // global
  SimTime latency;
};

struct FlowSeries {
  std::string flow_id;
  std::vector<LatencySample> samples;
};

struct TransmissionRecord {
  std::string device;
  PortId port = 0;
  Pcp pcp = 0;
  std::string flow_id;
  SimTime start_global;
  SimTime end_global;
  SimTime start_local;  // transmitting device's clock
  SimTime end_local;
};

struct ConfigApplyRecord {
  std::string device;
  SimTime global;
  SimTime local;
  bool synchronous_commit = false;  // false: direct edit on running
  DeviceConfig config_after;
};

// Device-local slack between CommitExecute arrival and the agreed commit
// instant; negative would mean a late release.
struct ExecuteMarginRecord {
  std::string device;
  std::int64_t margin_ns = 0;
};

struct FlowCounters {
  std::uint64_t created = 0;
  std::uint64_t received = 0;
  std::uint64_t dropped = 0;
};

// Shared sink for everything observable about a run.
struct TraceCollector {
  SimTime record_start;

  std::map<std::string, FlowSeries> series;
  std::vector<TransmissionRecord> transmissions;
  std::vector<ConfigApplyRecord> config_applies;
  std::map<std::string, DeviceConfig> initial_configs;
  std::vector<ExecuteMarginRecord> execute_margins;
  std::vector<std::string> control_log;

  std::map<std::string, FlowCounters> flows;
  std::uint64_t frames_created = 0;
  std::uint64_t frames_received = 0;
  std::uint64_t frames_dropped_no_match = 0;
  std::uint64_t frames_dropped_overflow = 0;
  std::uint64_t generator_fires = 0;

  std::uint64_t frames_dropped() const {
    return frames_dropped_no_match + frames_dropped_overflow;
  }

  void record_sample(const std::string& flow, SimTime recv, SimTime latency) {
    ++frames_received;
    ++flows[flow].received;
    if (recv < record_start) return;
    FlowSeries& s = series[flow];
    s.flow_id = flow;
    s.samples.push_back(LatencySample{recv, latency});
  }
};

}  // namespace tsnsim
