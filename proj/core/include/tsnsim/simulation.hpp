#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsnsim/controller.hpp"
#include "tsnsim/scenario.hpp"
#include "tsnsim/summary.hpp"
#include "tsnsim/trace.hpp"

namespace tsnsim {

struct TxnResult {
  std::uint64_t id = 0;
  std::string label;
  TxnOutcome outcome = TxnOutcome::AbortedInternal;
  bool committed = false;
  std::optional<SimTime> execute_at;  // agreed device-local commit instant
  std::vector<std::string> participants;
};

struct RunResult {
  Scenario scenario;
  std::map<std::string, SimTime> baselines;
  RunSummary summary;
  TraceCollector trace;
  std::vector<Controller::PhaseRecord> phase_log;
  std::vector<TxnResult> transactions;
  std::vector<Controller::Completion> completions;
  bool unexpected_abort = false;
  std::uint64_t late_executes = 0;
  std::uint64_t control_draws = 0;
  std::uint64_t outstanding_requests = 0;
  std::map<std::string, std::string> final_configs;  // canonical form per switch
  std::map<std::string, std::int64_t> clock_offsets;
  std::uint64_t events_processed = 0;

  const FlowSeries* series(const std::string& flow) const {
    auto it = trace.series.find(flow);
    return it == trace.series.end() ? nullptr : &it->second;
  }
};

// Analytic per-flow end-to-end latency of an uncongested schedule.
std::map<std::string, SimTime> analytic_baselines(const Scenario& scenario);

// Builds the network, runs the scenario to its horizon and collects every
// observable artifact. Throws ScenarioError when the scenario is invalid.
RunResult run_scenario(const Scenario& scenario);

// Writes latency_<flow>.csv, summary.json, control_log.txt and
// transactions.csv into out_dir (created if needed).
void write_outputs(const RunResult& result, const std::string& out_dir);

}  // namespace tsnsim
