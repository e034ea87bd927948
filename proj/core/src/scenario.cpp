#include "tsnsim/scenario.hpp"

#include "tsnsim/frame.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tsnsim {

const char* mode_name(RunMode m) {
  return m == RunMode::Transactional ? "transactional" : "non-transactional";
}

RunMode parse_mode(std::string_view text) {
  if (text == "transactional") return RunMode::Transactional;
  if (text == "non-transactional") return RunMode::NonTransactional;
  throw SimError("bad mode '" + std::string(text) + "'");
}

const DeviceSpec* Scenario::device(const std::string& name) const {
  for (const DeviceSpec& d : devices) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const FlowSpec* Scenario::flow(const std::string& id) const {
  for (const FlowSpec& f : flows) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

std::vector<std::string> Scenario::validate() const {
  std::vector<std::string> problems;
  auto complain = [&](std::string msg) { problems.push_back(std::move(msg)); };

  if (sim_end <= SimTime::ns(0)) complain("sim_end must be positive");
  if (record_start < SimTime::ns(0) || record_start >= sim_end)
    complain("record_start must lie inside the simulation horizon");
  if (schedule.cycle <= SimTime::ns(0)) complain("cycle must be positive");
  if (tolerance < SimTime::ns(0)) complain("tolerance must be non-negative");
  if (control.d_ctrl_min > control.d_ctrl_max) complain("d_ctrl_min exceeds d_ctrl_max");
  if (control.d_ctrl_max <= SimTime::ns(0) || control.p_proc <= SimTime::ns(0))
    complain("control-plane latencies must be positive");

  std::set<std::string> names;
  for (const DeviceSpec& d : devices) {
    if (!names.insert(d.name).second) complain("duplicate device name " + d.name);
  }
  std::set<std::uint64_t> macs;
  for (const DeviceSpec& d : devices) {
    if (!macs.insert(d.mac.value()).second) complain("duplicate MAC " + d.mac.to_string());
  }
  for (const LinkSpec& l : links) {
    if (!device(l.a)) complain("link references unknown device " + l.a);
    if (!device(l.b)) complain("link references unknown device " + l.b);
    if (l.speed_bps <= 0) complain("link speed must be positive");
  }

  std::set<std::string> flow_ids;
  std::set<int> slot_indices;
  for (const FlowSpec& f : flows) {
    if (!flow_ids.insert(f.id).second) complain("duplicate flow id " + f.id);
    if (!device(f.sender)) complain("flow " + f.id + " has unknown sender " + f.sender);
    if (!device(f.receiver)) complain("flow " + f.id + " has unknown receiver " + f.receiver);
    if (f.pcp >= kNumPriorities) complain("flow " + f.id + " has invalid pcp");
    if (f.payload_bytes < 0 || f.payload_bytes + kVlanFramingOverhead > kMaxVlanFramingBytes)
      complain("flow " + f.id + " payload exceeds the VLAN-tagged maximum");
    if (f.period <= SimTime::ns(0)) complain("flow " + f.id + " period must be positive");
    if ((sim_end - record_start) % f.period != SimTime::ns(0))
      complain("flow " + f.id + " period does not divide the recorded horizon");
    if (!slot_indices.insert(f.slot_index).second)
      complain("flow " + f.id + " reuses slot index " + std::to_string(f.slot_index));
  }

  SimTime last_trigger = SimTime::ns(-1);
  for (const AdmissionSpec& a : admissions) {
    if (!flow(a.flow)) complain("admission references unknown flow " + a.flow);
    if (a.rules_at <= last_trigger) complain("admission triggers must be strictly increasing");
    if (a.schedule_at <= a.rules_at) complain("admission " + a.flow + " schedule_at must follow rules_at");
    last_trigger = a.schedule_at;
  }
  return problems;
}

ScenarioError::ScenarioError(std::vector<std::string> problems)
    : SimError("invalid scenario: " + (problems.empty() ? std::string("?") : problems.front()) +
               (problems.size() > 1 ? " (+" + std::to_string(problems.size() - 1) + " more)" : "")),
      issues(std::move(problems)) {}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok.starts_with('#')) break;
    tokens.push_back(tok);
  }
  return tokens;
}

std::int64_t parse_int(const std::string& tok, const char* what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw SimError(std::string("bad ") + what + " '" + tok + "'");
  }
  return v;
}

std::int64_t parse_bytes(const std::string& tok) {
  if (!tok.ends_with("B")) throw SimError("bad size '" + tok + "': expected a B suffix");
  return parse_int(tok.substr(0, tok.size() - 1), "size");
}

std::int64_t parse_speed(const std::string& tok) {
  if (tok.ends_with("Gbit")) return parse_int(tok.substr(0, tok.size() - 4), "speed") * 1'000'000'000;
  if (tok.ends_with("Mbit")) return parse_int(tok.substr(0, tok.size() - 4), "speed") * 1'000'000;
  if (tok.ends_with("Kbit")) return parse_int(tok.substr(0, tok.size() - 4), "speed") * 1'000;
  if (tok.ends_with("bit")) return parse_int(tok.substr(0, tok.size() - 3), "speed");
  throw SimError("bad speed '" + tok + "': expected bit/Kbit/Mbit/Gbit suffix");
}

std::int64_t parse_meters(const std::string& tok) {
  if (!tok.ends_with("m")) throw SimError("bad length '" + tok + "': expected an m suffix");
  return parse_int(tok.substr(0, tok.size() - 1), "length");
}

// Key/value pairs after fixed positional tokens.
std::map<std::string, std::string> kv_pairs(const std::vector<std::string>& tokens, std::size_t from,
                                            const std::string& line) {
  std::map<std::string, std::string> kv;
  if ((tokens.size() - from) % 2 != 0) {
    throw SimError("expected key value pairs in '" + line + "'");
  }
  for (std::size_t i = from; i + 1 < tokens.size(); i += 2) {
    kv[tokens[i]] = tokens[i + 1];
  }
  return kv;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  s.devices.clear();
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      std::vector<std::string> t = tokenize(line);
      if (t.empty()) continue;
      const std::string& key = t[0];

      if (key == "name" && t.size() == 2) {
        s.name = t[1];
      } else if (key == "seed" && t.size() == 2) {
        s.seed = static_cast<std::uint64_t>(parse_int(t[1], "seed"));
      } else if (key == "mode" && t.size() == 2) {
        s.mode = parse_mode(t[1]);
      } else if (key == "sim_end" && t.size() == 2) {
        s.sim_end = parse_duration(t[1]);
      } else if (key == "record_start" && t.size() == 2) {
        s.record_start = parse_duration(t[1]);
      } else if (key == "sync_bound" && t.size() == 2) {
        s.sync_bound = parse_duration(t[1]);
      } else if (key == "tolerance" && t.size() == 2) {
        s.tolerance = parse_duration(t[1]);
      } else if (key == "control") {
        auto kv = kv_pairs(t, 1, line);
        for (auto& [k, v] : kv) {
          if (k == "d_ctrl_min") s.control.d_ctrl_min = parse_duration(v);
          else if (k == "d_ctrl_max") s.control.d_ctrl_max = parse_duration(v);
          else if (k == "p_proc") s.control.p_proc = parse_duration(v);
          else if (k == "apply_margin") s.control.apply_margin = parse_duration(v);
          else if (k == "phase_timeout") s.control.phase_timeout = parse_duration(v);
          else throw SimError("unknown control key '" + k + "'");
        }
      } else if (key == "schedule") {
        auto kv = kv_pairs(t, 1, line);
        for (auto& [k, v] : kv) {
          if (k == "cycle") s.schedule.cycle = parse_duration(v);
          else if (k == "slot_margin") s.schedule.slot_margin = parse_duration(v);
          else if (k == "guard_band") s.schedule.guard_band = parse_duration(v);
          else if (k == "commit_align") s.schedule.align_commit_to_period = (v == "period_start");
          else throw SimError("unknown schedule key '" + k + "'");
        }
      } else if (key == "device" && t.size() >= 4) {
        DeviceSpec d;
        d.name = t[1];
        auto kv = kv_pairs(t, 2, line);
        if (!kv.contains("kind") || !kv.contains("mac")) {
          throw SimError("device needs kind and mac");
        }
        d.kind = kv["kind"] == "switch" ? DeviceSpec::Kind::Switch : DeviceSpec::Kind::EndStation;
        d.mac = MacAddress::parse(kv["mac"]);
        if (kv.contains("forwarding_delay")) d.forwarding_delay = parse_duration(kv["forwarding_delay"]);
        s.devices.push_back(std::move(d));
      } else if (key == "link" && t.size() >= 3) {
        LinkSpec l;
        l.a = t[1];
        l.b = t[2];
        auto kv = kv_pairs(t, 3, line);
        if (kv.contains("speed")) l.speed_bps = parse_speed(kv["speed"]);
        if (kv.contains("length")) l.length_m = parse_meters(kv["length"]);
        if (kv.contains("propagation")) l.propagation_ns_per_m = parse_int(kv["propagation"], "propagation");
        s.links.push_back(std::move(l));
      } else if (key == "flow" && t.size() >= 6 && t[2] == "from" && t[4] == "to") {
        FlowSpec f;
        f.id = t[1];
        f.sender = t[3];
        f.receiver = t[5];
        auto kv = kv_pairs(t, 6, line);
        if (kv.contains("pcp")) f.pcp = static_cast<Pcp>(parse_int(kv["pcp"], "pcp"));
        if (kv.contains("payload")) f.payload_bytes = parse_bytes(kv["payload"]);
        if (kv.contains("period")) f.period = parse_duration(kv["period"]);
        if (kv.contains("start")) f.start_offset = parse_duration(kv["start"]);
        if (kv.contains("vlan")) f.vlan = static_cast<std::uint16_t>(parse_int(kv["vlan"], "vlan"));
        if (kv.contains("slot_index")) f.slot_index = static_cast<int>(parse_int(kv["slot_index"], "slot_index"));
        s.flows.push_back(std::move(f));
      } else if (key == "admit" && t.size() >= 2) {
        AdmissionSpec a;
        a.flow = t[1];
        auto kv = kv_pairs(t, 2, line);
        if (!kv.contains("rules_at") || !kv.contains("schedule_at")) {
          throw SimError("admit needs rules_at and schedule_at");
        }
        a.rules_at = parse_duration(kv["rules_at"]);
        a.schedule_at = parse_duration(kv["schedule_at"]);
        s.admissions.push_back(std::move(a));
      } else {
        throw SimError("unrecognized directive '" + key + "'");
      }
    }
  } catch (const SimError& e) {
    throw ScenarioError({std::string(e.what()) + " at line " + std::to_string(line_no)});
  }
  auto problems = s.validate();
  if (!problems.empty()) {
    throw ScenarioError(std::move(problems));
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError("cannot open scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "# tsnsim scenario\n";
  out << "name " << s.name << "\n";
  out << "seed " << s.seed << "\n";
  out << "mode " << mode_name(s.mode) << "\n";
  out << "sim_end " << format_duration(s.sim_end) << "\n";
  out << "record_start " << format_duration(s.record_start) << "\n";
  out << "sync_bound " << format_duration(s.sync_bound) << "\n";
  out << "tolerance " << format_duration(s.tolerance) << "\n";
  out << "control d_ctrl_min " << format_duration(s.control.d_ctrl_min) << " d_ctrl_max "
      << format_duration(s.control.d_ctrl_max) << " p_proc " << format_duration(s.control.p_proc)
      << " apply_margin " << format_duration(s.control.apply_margin) << " phase_timeout "
      << format_duration(s.control.phase_timeout) << "\n";
  out << "schedule cycle " << format_duration(s.schedule.cycle) << " slot_margin "
      << format_duration(s.schedule.slot_margin) << " guard_band "
      << format_duration(s.schedule.guard_band) << " commit_align "
      << (s.schedule.align_commit_to_period ? "period_start" : "none") << "\n";
  for (const DeviceSpec& d : s.devices) {
    out << "device " << d.name << " kind "
        << (d.kind == DeviceSpec::Kind::Switch ? "switch" : "endstation") << " mac "
        << d.mac.to_string();
    if (d.kind == DeviceSpec::Kind::Switch) {
      out << " forwarding_delay " << format_duration(d.forwarding_delay);
    }
    out << "\n";
  }
  for (const LinkSpec& l : s.links) {
    out << "link " << l.a << " " << l.b << " speed " << l.speed_bps << "bit length " << l.length_m
        << "m propagation " << l.propagation_ns_per_m << "\n";
  }
  for (const FlowSpec& f : s.flows) {
    out << "flow " << f.id << " from " << f.sender << " to " << f.receiver << " pcp "
        << static_cast<int>(f.pcp) << " payload " << f.payload_bytes << "B period "
        << format_duration(f.period) << " start " << format_duration(f.start_offset) << " vlan "
        << f.vlan << " slot_index " << f.slot_index << "\n";
  }
  for (const AdmissionSpec& a : s.admissions) {
    out << "admit " << a.flow << " rules_at " << format_duration(a.rules_at) << " schedule_at "
        << format_duration(a.schedule_at) << "\n";
  }
  return out.str();
}

}  // namespace tsnsim
