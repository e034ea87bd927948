#include "tsnsim/case_study.hpp"

namespace tsnsim {

Scenario build_case_study(RunMode mode) {
  Scenario s;
  s.name = "case-study";
  s.mode = mode;
  s.seed = 1;
  s.sim_end = SimTime::ms(500);
  s.record_start = SimTime::ms(50);
  s.sync_bound = SimTime::ns(500);
  s.tolerance = SimTime::us(1);

  auto station = [&](const char* name, const char* mac) {
    DeviceSpec d;
    d.kind = DeviceSpec::Kind::EndStation;
    d.name = name;
    d.mac = MacAddress::parse(mac);
    s.devices.push_back(std::move(d));
  };
  auto sw = [&](const char* name, const char* mac) {
    DeviceSpec d;
    d.kind = DeviceSpec::Kind::Switch;
    d.name = name;
    d.mac = MacAddress::parse(mac);
    d.forwarding_delay = SimTime::us(3);
    s.devices.push_back(std::move(d));
  };
  station("node1", "02:00:00:00:00:11");
  station("node2", "02:00:00:00:00:12");
  station("node3", "02:00:00:00:00:13");
  station("node4", "02:00:00:00:00:14");
  sw("sw1", "02:00:00:00:00:01");
  sw("sw2", "02:00:00:00:00:02");

  auto link = [&](const char* a, const char* b) {
    LinkSpec l;
    l.a = a;
    l.b = b;
    l.speed_bps = 100'000'000;
    l.length_m = 10;
    l.propagation_ns_per_m = 5;
    s.links.push_back(std::move(l));
  };
  link("node1", "sw1");
  link("node4", "sw1");
  link("sw1", "sw2");
  link("node2", "sw2");
  link("node3", "sw2");

  // One full-size frame per 1 ms cycle and flow; senders join 100 ms apart.
  auto flow = [&](const char* id, const char* from, SimTime start, std::uint16_t vlan, int slot) {
    FlowSpec f;
    f.id = id;
    f.sender = from;
    f.receiver = "node3";
    f.pcp = 7;
    f.payload_bytes = 1500;  // 1522-byte tagged frame on the wire
    f.period = SimTime::ms(1);
    f.start_offset = start;
    f.vlan = vlan;
    f.slot_index = slot;
    s.flows.push_back(std::move(f));
  };
  flow("flow1", "node1", SimTime::ms(100), 101, 0);
  flow("flow2", "node2", SimTime::ms(200), 102, 1);
  flow("flow3", "node4", SimTime::ms(300), 103, 2);

  auto admit = [&](const char* id, SimTime rules_at, SimTime schedule_at) {
    s.admissions.push_back(AdmissionSpec{id, rules_at, schedule_at});
  };
  admit("flow1", SimTime::ms(102), SimTime::ms(105));
  admit("flow2", SimTime::ms(202), SimTime::ms(205));
  admit("flow3", SimTime::ms(302), SimTime::ms(305));

  return s;
}

}  // namespace tsnsim
