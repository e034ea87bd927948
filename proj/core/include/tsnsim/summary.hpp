#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsnsim/trace.hpp"

namespace tsnsim {

struct FlowStats {
  std::string flow_id;
  std::uint64_t count = 0;
  SimTime min_latency;
  SimTime max_latency;
  double mean_latency_ns = 0.0;
  SimTime baseline;
  SimTime tolerance;
  std::uint64_t violation_count = 0;  // samples above baseline + tolerance
  std::optional<SimTime> first_violation;
  std::optional<SimTime> last_violation;
  std::uint64_t created = 0;
  std::uint64_t dropped = 0;
};

struct TxnSummary {
  std::string label;
  std::string outcome;
  bool committed = false;
  std::optional<SimTime> commit_instant;  // agreed device-local execute_at
};

struct RunSummary {
  std::vector<FlowStats> flows;
  std::vector<TxnSummary> transactions;
  std::uint64_t frames_created = 0;
  std::uint64_t frames_received = 0;
  std::uint64_t frames_dropped = 0;

  const FlowStats* flow(const std::string& id) const {
    for (const FlowStats& f : flows) {
      if (f.flow_id == id) return &f;
    }
    return nullptr;
  }
};

// Per-flow statistics over the recorded series. Flows present in
// `baselines` but absent from `series` appear with zero counts.
RunSummary summarize(const std::map<std::string, FlowSeries>& series,
                     const std::map<std::string, SimTime>& baselines, SimTime tolerance);

std::string summary_to_json(const RunSummary& summary);

// CSV with header `flow_id,recv_time_s,latency_s`, times in decimal seconds
// with nine fractional digits.
std::string series_to_csv(const FlowSeries& series);

}  // namespace tsnsim
