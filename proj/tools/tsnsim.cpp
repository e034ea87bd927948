// tsnsim command line front end: run scenarios, print analytic baselines,
// compare two result directories, emit the built-in case study.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "tsnsim/case_study.hpp"
#include "tsnsim/scenario.hpp"
#include "tsnsim/simulation.hpp"

namespace {

constexpr int kExitInvalidScenario = 2;
constexpr int kExitUnexpectedAbort = 3;
constexpr int kExitIoError = 4;

tsnsim::Scenario load_with_overrides(const std::string& path, const std::string& mode,
                                     std::optional<std::uint64_t> seed) {
  tsnsim::Scenario s = tsnsim::load_scenario_file(path);
  if (!mode.empty()) s.mode = tsnsim::parse_mode(mode);
  if (seed) s.seed = *seed;
  return s;
}

int cmd_simulate(const std::string& scenario_path, const std::string& mode,
                 std::optional<std::uint64_t> seed, const std::string& out_dir) {
  tsnsim::Scenario s;
  try {
    s = load_with_overrides(scenario_path, mode, seed);
  } catch (const tsnsim::ScenarioError& e) {
    std::cerr << "invalid scenario:\n";
    for (const std::string& issue : e.issues) std::cerr << "  - " << issue << "\n";
    return kExitInvalidScenario;
  } catch (const tsnsim::SimError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalidScenario;
  }

  tsnsim::RunResult r = tsnsim::run_scenario(s);
  if (!out_dir.empty()) {
    tsnsim::write_outputs(r, out_dir);
  }

  std::cout << "scenario " << s.name << " mode " << mode_name(s.mode) << " seed " << s.seed << "\n";
  std::cout << "frames: created " << r.summary.frames_created << ", received "
            << r.summary.frames_received << ", dropped " << r.summary.frames_dropped << "\n";
  for (const tsnsim::FlowStats& f : r.summary.flows) {
    std::cout << "flow " << f.flow_id << ": samples " << f.count;
    if (f.count) {
      std::cout << ", min " << f.min_latency.count() << "ns, max " << f.max_latency.count()
                << "ns, baseline " << f.baseline.count() << "ns, violations " << f.violation_count;
    }
    std::cout << "\n";
  }
  for (const tsnsim::TxnSummary& t : r.summary.transactions) {
    std::cout << "txn " << t.label << ": " << t.outcome;
    if (t.commit_instant) std::cout << ", commit at " << t.commit_instant->count() << "ns";
    std::cout << "\n";
  }
  if (r.unexpected_abort) {
    std::cerr << "error: a reconfiguration did not complete\n";
    return kExitUnexpectedAbort;
  }
  return 0;
}

int cmd_baseline(const std::string& scenario_path) {
  try {
    tsnsim::Scenario s = tsnsim::load_scenario_file(scenario_path);
    for (const auto& [flow, latency] : tsnsim::analytic_baselines(s)) {
      std::cout << flow << " " << latency.count() << "ns (" << tsnsim::format_seconds(latency)
                << "s)\n";
    }
    return 0;
  } catch (const tsnsim::SimError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalidScenario;
  }
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b) {
  auto load = [](const std::string& dir) {
    std::ifstream in(std::filesystem::path(dir) / "summary.json");
    if (!in) throw tsnsim::SimError("cannot read summary.json in " + dir);
    return nlohmann::json::parse(in);
  };
  try {
    nlohmann::json a = load(dir_a);
    nlohmann::json b = load(dir_b);
    std::cout << "flow               violations(a)  violations(b)  max_ns(a)      max_ns(b)\n";
    for (const auto& fa : a["flows"]) {
      std::string id = fa["flow_id"];
      const nlohmann::json* fb = nullptr;
      for (const auto& cand : b["flows"]) {
        if (cand["flow_id"] == id) fb = &cand;
      }
      std::printf("%-18s %-14llu %-14llu %-14lld %-14lld\n", id.c_str(),
                  static_cast<unsigned long long>(fa["violation_count"].get<std::uint64_t>()),
                  static_cast<unsigned long long>(fb ? (*fb)["violation_count"].get<std::uint64_t>() : 0),
                  static_cast<long long>(fa["max_latency_ns"].get<std::int64_t>()),
                  static_cast<long long>(fb ? (*fb)["max_latency_ns"].get<std::int64_t>() : 0));
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitIoError;
  }
}

int cmd_emit(const std::string& mode, const std::string& out_path) {
  tsnsim::Scenario s = tsnsim::build_case_study(tsnsim::parse_mode(mode));
  std::string text = tsnsim::serialize_scenario(s);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return kExitIoError;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator of synchronized transactional TSN reconfiguration"};
  app.require_subcommand(1);

  std::string scenario_path, mode, out_dir, dir_a, dir_b, emit_out;
  std::optional<std::uint64_t> seed;

  CLI::App* simulate = app.add_subcommand("simulate", "Run a scenario and write results");
  simulate->add_option("--scenario", scenario_path, "Scenario file")->required();
  simulate->add_option("--mode", mode, "transactional | non-transactional");
  simulate->add_option("--seed", seed, "Override the scenario seed");
  simulate->add_option("--out", out_dir, "Output directory");

  CLI::App* baseline = app.add_subcommand("baseline", "Print analytic per-flow latencies");
  baseline->add_option("--scenario", scenario_path, "Scenario file")->required();

  CLI::App* compare = app.add_subcommand("compare", "Diff the violations of two result directories");
  compare->add_option("--a", dir_a, "First result directory")->required();
  compare->add_option("--b", dir_b, "Second result directory")->required();

  CLI::App* emit = app.add_subcommand("emit-scenario", "Write the built-in case study scenario");
  emit->add_option("--mode", mode, "transactional | non-transactional")->required();
  emit->add_option("--out", emit_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(scenario_path, mode, seed, out_dir);
    if (baseline->parsed()) return cmd_baseline(scenario_path);
    if (compare->parsed()) return cmd_compare(dir_a, dir_b);
    if (emit->parsed()) return cmd_emit(mode, emit_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
