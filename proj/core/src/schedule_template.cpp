#include "tsnsim/schedule_template.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "tsnsim/frame.hpp"

namespace tsnsim {

namespace {

// Shortest path over the scenario's links, endpoints inclusive.
std::vector<std::string> scenario_path(const Scenario& s, const std::string& from,
                                       const std::string& to) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const LinkSpec& l : s.links) {
    adj[l.a].push_back(l.b);
    adj[l.b].push_back(l.a);
  }
  std::map<std::string, std::string> parent;
  std::queue<std::string> frontier;
  frontier.push(from);
  parent[from] = from;
  while (!frontier.empty()) {
    std::string cur = frontier.front();
    frontier.pop();
    if (cur == to) break;
    for (const std::string& next : adj[cur]) {
      if (!parent.contains(next)) {
        parent[next] = cur;
        frontier.push(next);
      }
    }
  }
  if (!parent.contains(to)) {
    throw SimError("no path from " + from + " to " + to);
  }
  std::vector<std::string> out;
  for (std::string cur = to;; cur = parent[cur]) {
    out.push_back(cur);
    if (cur == from) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

const LinkSpec& link_between(const Scenario& s, const std::string& a, const std::string& b) {
  for (const LinkSpec& l : s.links) {
    if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return l;
  }
  throw SimError("no link between " + a + " and " + b);
}

// Egress port numbering mirrors Network::connect: one port per link end, in
// scenario link order.
PortId egress_port_of(const Scenario& s, const std::string& device, const std::string& neighbor) {
  PortId next = 0;
  for (const LinkSpec& l : s.links) {
    if (l.a == device || l.b == device) {
      const std::string& other = l.a == device ? l.b : l.a;
      if (other == neighbor) return next;
      ++next;
    }
  }
  throw SimError("device " + device + " has no link toward " + neighbor);
}

}  // namespace

ScheduleTemplate::ScheduleTemplate(const Scenario& scenario)
    : scenario_(scenario), cycle_(scenario.schedule.cycle) {
  lead_ = scenario.sync_bound * 2;

  // Sub-slot: longest frame transmission among the scenario's flows.
  sub_slot_ = SimTime::ns(0);
  for (const FlowSpec& f : scenario.flows) {
    Frame probe;
    probe.payload_size = f.payload_bytes;
    std::vector<std::string> p = scenario_path(scenario, f.sender, f.receiver);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      Link link{link_between(scenario, p[i], p[i + 1]).speed_bps,
                link_between(scenario, p[i], p[i + 1]).length_m,
                link_between(scenario, p[i], p[i + 1]).propagation_ns_per_m};
      sub_slot_ = std::max(sub_slot_, link.transmission_duration(probe));
    }
  }
  pitch_ = sub_slot_ + scenario.sync_bound * 2;

  // Pipeline offsets along each flow's path.
  struct FlowPipeline {
    SimTime total;  // offset of the last switch egress
    std::vector<Hop> hops;
  };
  std::map<std::string, FlowPipeline> pipelines;
  SimTime anchor;
  for (const FlowSpec& f : scenario.flows) {
    Frame probe;
    probe.payload_size = f.payload_bytes;
    std::vector<std::string> p = scenario_path(scenario, f.sender, f.receiver);
    FlowPipeline pl;
    SimTime offset;
    analytic_[f.id] = SimTime::ns(0);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const LinkSpec& ls = link_between(scenario, p[i], p[i + 1]);
      Link link{ls.speed_bps, ls.length_m, ls.propagation_ns_per_m};
      SimTime leg = link.transmission_duration(probe) + link.propagation_delay();
      analytic_[f.id] += leg;
      if (i + 1 < p.size() - 1) {
        // p[i+1] is a switch the frame passes through.
        const DeviceSpec* sw = scenario.device(p[i + 1]);
        offset += leg + sw->forwarding_delay;
        analytic_[f.id] += sw->forwarding_delay;
        pl.hops.push_back(Hop{p[i + 1], egress_port_of(scenario, p[i + 1], p[i + 2]), offset});
      }
    }
    pl.total = pl.hops.empty() ? SimTime::ns(0) : pl.hops.back().arrival_phase;
    pipelines[f.id] = std::move(pl);
  }
  for (auto& [id, pl] : pipelines) {
    anchor = std::max(anchor, pl.total);
  }

  // Generator phases and per-port slot grids.
  for (const FlowSpec& f : scenario.flows) {
    FlowPipeline& pl = pipelines[f.id];
    SimTime phase = wrap(anchor + pitch_ * f.slot_index - pl.total);
    phases_[f.id] = phase;
    station_masks_[f.sender] |= static_cast<std::uint8_t>(1u << f.pcp);
    station_flows_[f.sender].push_back(f.id);

    for (Hop& h : pl.hops) {
      h.arrival_phase = wrap(phase + h.arrival_phase);
      PortKey key{h.device, h.port};
      SimTime base = wrap(h.arrival_phase - pitch_ * f.slot_index);
      auto [it, inserted] = ports_.try_emplace(key, PortInfo{base, 0, {}});
      if (!inserted && it->second.base != base) {
        throw SimError("TDMA grid infeasible: port " + h.device + ":" + std::to_string(h.port) +
                       " has conflicting slot bases");
      }
      it->second.rt_mask |= static_cast<std::uint8_t>(1u << f.pcp);
      it->second.flows.push_back(f.id);
    }
    hops_[f.id] = pl.hops;
  }
}

SimTime ScheduleTemplate::generator_phase(const std::string& flow) const {
  auto it = phases_.find(flow);
  if (it == phases_.end()) throw SimError("unknown flow " + flow);
  return it->second;
}

const std::vector<ScheduleTemplate::Hop>& ScheduleTemplate::switch_hops(const std::string& flow) const {
  auto it = hops_.find(flow);
  if (it == hops_.end()) throw SimError("unknown flow " + flow);
  return it->second;
}

SimTime ScheduleTemplate::analytic_latency(const std::string& flow) const {
  auto it = analytic_.find(flow);
  if (it == analytic_.end()) throw SimError("unknown flow " + flow);
  return it->second;
}

GateControlList ScheduleTemplate::switch_port_gcl(const std::string& device, PortId port,
                                                  int max_slot_index) const {
  auto it = ports_.find(PortKey{device, port});
  if (it == ports_.end()) {
    return GateControlList::all_open(cycle_);
  }
  const PortInfo& info = it->second;
  int max_present = -1;
  for (const std::string& id : info.flows) {
    const FlowSpec* f = scenario_.flow(id);
    if (f->slot_index <= max_slot_index) max_present = std::max(max_present, f->slot_index);
  }
  if (max_present < 0) {
    return GateControlList::all_open(cycle_);
  }
  SimTime open_start = wrap(info.base - lead_);
  SimTime open_len = lead_ + pitch_ * max_present + sub_slot_ + scenario_.schedule.slot_margin;
  return build_slot_gcl(cycle_, {{open_start, open_len}}, scenario_.schedule.guard_band, info.rt_mask);
}

GateControlList ScheduleTemplate::end_station_gcl(const std::string& device) const {
  auto it = station_flows_.find(device);
  if (it == station_flows_.end()) {
    return GateControlList::all_open(cycle_);
  }
  std::vector<std::pair<SimTime, SimTime>> slots;
  for (const std::string& id : it->second) {
    SimTime start = wrap(phases_.at(id) - lead_);
    slots.emplace_back(start, lead_ + sub_slot_ + scenario_.schedule.slot_margin);
  }
  return build_slot_gcl(cycle_, slots, scenario_.schedule.guard_band, station_masks_.at(device));
}

Changeset ScheduleTemplate::rules_changeset(const std::string& device, const std::string& flow) const {
  const FlowSpec* f = scenario_.flow(flow);
  if (!f) throw SimError("unknown flow " + flow);
  const DeviceSpec* receiver = scenario_.device(f->receiver);
  for (const Hop& h : switch_hops(flow)) {
    if (h.device == device) {
      FlowEntry entry;
      entry.match.dst_mac = receiver->mac;
      entry.match.vlan_id = f->vlan;
      entry.match.pcp = f->pcp;
      entry.action = ForwardAction{h.port};
      Changeset cs;
      cs.edits.push_back(AddFlowEntryEdit{kAppend, std::move(entry)});
      return cs;
    }
  }
  return Changeset{};
}

Changeset ScheduleTemplate::gcl_changeset(const std::string& device, const std::string& flow) const {
  const FlowSpec* f = scenario_.flow(flow);
  if (!f) throw SimError("unknown flow " + flow);
  Changeset cs;
  for (const Hop& h : switch_hops(flow)) {
    if (h.device == device) {
      cs.edits.push_back(ReplaceGclEdit{h.port, switch_port_gcl(device, h.port, f->slot_index)});
    }
  }
  return cs;
}

GateControlList build_slot_gcl(SimTime cycle, const std::vector<std::pair<SimTime, SimTime>>& slots,
                               SimTime guard, std::uint8_t rt_mask) {
  const std::uint8_t be_mask = static_cast<std::uint8_t>(~rt_mask);

  struct Span {
    std::int64_t start;
    std::int64_t len;
    std::uint8_t mask;
  };
  // Open windows first so a guard band never shadows another window.
  std::vector<Span> spans;
  for (const auto& [start, len] : slots) {
    if (len + guard > cycle) {
      throw SimError("slot plus guard band exceeds the cycle");
    }
    spans.push_back(Span{start.count() % cycle.count(), len.count(), rt_mask});
  }
  for (const auto& [start, len] : slots) {
    std::int64_t g = start.count() % cycle.count() - guard.count();
    if (g < 0) g += cycle.count();
    spans.push_back(Span{g, guard.count(), kAllGatesClosed});
  }

  // Cut the circle at every span boundary and paint each interval.
  std::set<std::int64_t> cuts{0};
  for (const Span& sp : spans) {
    cuts.insert(sp.start % cycle.count());
    cuts.insert((sp.start + sp.len) % cycle.count());
  }
  auto covered_by = [&](std::int64_t point) -> std::uint8_t {
    for (const Span& sp : spans) {
      std::int64_t rel = point - sp.start;
      if (rel < 0) rel += cycle.count();
      if (rel < sp.len) return sp.mask;
    }
    return be_mask;
  };

  std::vector<std::int64_t> bounds(cuts.begin(), cuts.end());
  std::vector<GclEntry> entries;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    std::int64_t from = bounds[i];
    std::int64_t to = i + 1 < bounds.size() ? bounds[i + 1] : cycle.count();
    if (to == from) continue;
    std::uint8_t mask = covered_by(from);
    if (!entries.empty() && entries.back().gate_states == mask) {
      entries.back().duration += SimTime::ns(to - from);
    } else {
      entries.push_back(GclEntry{SimTime::ns(to - from), mask});
    }
  }
  // Merge across the wrap point when first and last masks agree and there
  // is more than one entry (a single entry already spans the cycle).
  GateControlList gcl(cycle, SimTime::ns(0), std::move(entries));
  if (auto err = gcl.validate()) {
    throw SimError("constructed GCL invalid: " + *err);
  }
  return gcl;
}

std::vector<ScriptEntry> build_update_script(const Scenario& scenario, const ScheduleTemplate& tmpl) {
  std::vector<ScriptEntry> script;
  std::vector<std::string> all_switches;
  for (const DeviceSpec& d : scenario.devices) {
    if (d.kind == DeviceSpec::Kind::Switch) all_switches.push_back(d.name);
  }

  int index = 0;
  for (const AdmissionSpec& adm : scenario.admissions) {
    // Switches on the admitted flow's path, in path order.
    std::vector<std::string> path_switches;
    for (const auto& hop : tmpl.switch_hops(adm.flow)) {
      if (std::find(path_switches.begin(), path_switches.end(), hop.device) == path_switches.end()) {
        path_switches.push_back(hop.device);
      }
    }

    if (scenario.mode == RunMode::Transactional) {
      // One transaction per admitted flow, spanning every switch so the
      // whole network steps between consistent states at one instant.
      ScriptEntry e;
      e.label = "T" + std::to_string(index + 1);
      e.trigger = adm.rules_at;
      e.transactional = true;
      e.participants = all_switches;
      for (const std::string& sw : all_switches) {
        UpdateStep step;
        step.device = sw;
        Changeset rules = tmpl.rules_changeset(sw, adm.flow);
        Changeset gates = tmpl.gcl_changeset(sw, adm.flow);
        step.changes.edits.insert(step.changes.edits.end(), rules.edits.begin(), rules.edits.end());
        step.changes.edits.insert(step.changes.edits.end(), gates.edits.begin(), gates.edits.end());
        e.steps.push_back(std::move(step));
      }
      script.push_back(std::move(e));
    } else {
      ScriptEntry rules;
      rules.label = "U" + std::to_string(2 * index + 1);
      rules.trigger = adm.rules_at;
      for (const std::string& sw : path_switches) {
        rules.steps.push_back(UpdateStep{sw, tmpl.rules_changeset(sw, adm.flow)});
      }
      script.push_back(std::move(rules));

      ScriptEntry gates;
      gates.label = "U" + std::to_string(2 * index + 2);
      gates.trigger = adm.schedule_at;
      for (const std::string& sw : path_switches) {
        gates.steps.push_back(UpdateStep{sw, tmpl.gcl_changeset(sw, adm.flow)});
      }
      script.push_back(std::move(gates));
    }
    ++index;
  }
  return script;
}

}  // namespace tsnsim
