#include "support/gate_audit.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace tsnsim::audit {

bool gate_open_at(const GateControlList& gcl, Pcp pcp, std::int64_t t_local_ns) {
  const std::int64_t cycle = gcl.cycle_duration().count();
  std::int64_t phase = (t_local_ns - gcl.base_offset().count()) % cycle;
  if (phase < 0) phase += cycle;
  std::int64_t acc = 0;
  for (const GclEntry& e : gcl.entries()) {
    acc += e.duration.count();
    if (phase < acc) {
      return (e.gate_states >> pcp) & 1u;
    }
  }
  return false;
}

namespace {

// Smallest entry boundary strictly greater than t (in local time).
std::int64_t next_boundary_after(const GateControlList& gcl, std::int64_t t) {
  const std::int64_t cycle = gcl.cycle_duration().count();
  std::int64_t phase = (t - gcl.base_offset().count()) % cycle;
  if (phase < 0) phase += cycle;
  std::int64_t acc = 0;
  for (const GclEntry& e : gcl.entries()) {
    acc += e.duration.count();
    if (phase < acc) {
      return t + (acc - phase);
    }
  }
  return t + (cycle - phase);
}

}  // namespace

bool gate_open_throughout(const GateControlList& gcl, Pcp pcp, std::int64_t from, std::int64_t to) {
  std::int64_t t = from;
  while (t < to) {
    if (!gate_open_at(gcl, pcp, t)) return false;
    t = next_boundary_after(gcl, t);
  }
  return true;
}

AuditResult audit_run(const RunResult& result) {
  AuditResult out;

  // Per-device timeline of configurations in device-local time.
  struct Version {
    std::int64_t from_local;
    DeviceConfig config;
  };
  std::map<std::string, std::vector<Version>> timelines;
  for (const auto& [device, config] : result.trace.initial_configs) {
    timelines[device].push_back(Version{std::numeric_limits<std::int64_t>::min(), config});
  }
  for (const ConfigApplyRecord& rec : result.trace.config_applies) {
    timelines[rec.device].push_back(Version{rec.local.count(), rec.config_after});
  }
  for (auto& [device, versions] : timelines) {
    std::stable_sort(versions.begin(), versions.end(),
                     [](const Version& a, const Version& b) { return a.from_local < b.from_local; });
  }

  for (const TransmissionRecord& tx : result.trace.transmissions) {
    ++out.transmissions_checked;
    auto it = timelines.find(tx.device);
    if (it == timelines.end()) {
      out.violations.push_back("no config history for device " + tx.device);
      continue;
    }
    const std::vector<Version>& versions = it->second;
    const std::int64_t start = tx.start_local.count();
    const std::int64_t end = tx.end_local.count();

    // Walk the config versions overlapping [start, end).
    for (std::size_t i = 0; i < versions.size(); ++i) {
      std::int64_t v_from = versions[i].from_local;
      std::int64_t v_to = i + 1 < versions.size() ? versions[i + 1].from_local
                                                  : std::numeric_limits<std::int64_t>::max();
      std::int64_t seg_from = std::max(start, v_from);
      std::int64_t seg_to = std::min(end, v_to);
      if (seg_from >= seg_to) continue;
      const GateControlList* gcl = versions[i].config.gcl_for(tx.port);
      if (!gcl) continue;  // ungated port
      if (!gate_open_throughout(*gcl, tx.pcp, seg_from, seg_to)) {
        std::ostringstream msg;
        msg << tx.device << ":port" << tx.port << " pcp " << int(tx.pcp) << " flow " << tx.flow_id
            << " transmission [" << start << "," << end << ")ns overlaps a closed gate interval";
        out.violations.push_back(msg.str());
        break;
      }
    }
  }
  return out;
}

}  // namespace tsnsim::audit
