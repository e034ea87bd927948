#include <doctest.h>

#include "tsnsim/network.hpp"

using namespace tsnsim;

namespace {

struct Rig {
  Kernel kernel{SimTime::ns(500)};
  TraceCollector trace;
  Network net{kernel, trace};

  Rig() { trace.record_start = SimTime::ns(0); }
};

Frame make_frame(const char* flow, MacAddress dst, Pcp pcp, SimTime created) {
  Frame f;
  f.src_mac = MacAddress(1);
  f.dst_mac = dst;
  f.vlan_id = 101;
  f.pcp = pcp;
  f.payload_size = 1500;
  f.flow_id = flow;
  f.created_at = created;
  return f;
}

// node_a -- sw -- node_b with perfectly synchronized clocks.
struct SwitchRig : Rig {
  EndStation* a;
  SwitchDevice* sw;
  EndStation* b;

  SwitchRig() {
    a = &net.add_end_station("node_a", MacAddress(0x11));
    b = &net.add_end_station("node_b", MacAddress(0x13));
    sw = &net.add_switch("sw", MacAddress(0x01), SimTime::us(3));
    for (const char* n : {"node_a", "node_b", "sw"}) {
      kernel.register_clock(net.id_of(n), 0);
    }
    net.connect("node_a", "sw", Link{});
    net.connect("sw", "node_b", Link{});

    DeviceConfig cfg;
    for (PortId p = 0; p < sw->port_count(); ++p) {
      cfg.gcls[p] = GateControlList::all_open(SimTime::ms(1));
    }
    FlowEntry to_b;
    to_b.match.dst_mac = MacAddress(0x13);
    to_b.action = ForwardAction{net.port_toward("sw", "node_b")};
    cfg.flow_table.entries().push_back(std::move(to_b));
    sw->init_agent(std::move(cfg), SimTime::us(10));
  }
};

}  // namespace

TEST_CASE("one switch hop decomposes into transmission, forwarding and propagation") {
  SwitchRig rig;
  rig.a->port(0)->enqueue(make_frame("f", MacAddress(0x13), 7, SimTime::ns(0)));
  rig.kernel.run_until(SimTime::ms(2));
  REQUIRE(rig.trace.series.count("f") == 1);
  REQUIRE(rig.trace.series["f"].samples.size() == 1);
  // 2 x 122400 (transmissions) + 3000 (forwarding) + 2 x 50 (propagation).
  CHECK(rig.trace.series["f"].samples[0].latency == SimTime::ns(247'900));
}

TEST_CASE("frames matching no flow entry are dropped and counted") {
  SwitchRig rig;
  Frame stray = make_frame("stray", MacAddress(0x77), 7, SimTime::ns(0));
  rig.a->port(0)->enqueue(std::move(stray));
  rig.kernel.run_until(SimTime::ms(2));
  CHECK(rig.trace.frames_dropped_no_match == 1);
  CHECK(rig.trace.flows["stray"].dropped == 1);
  CHECK(rig.trace.series.empty());
}

TEST_CASE("strict priority: the highest open queue transmits first") {
  SwitchRig rig;
  // Hold both frames behind an initially closed gate, then open everything.
  GateControlList gated(SimTime::ms(1), SimTime::ns(0),
                        {GclEntry{SimTime::us(10), 0x00}, GclEntry{SimTime::us(990), 0xff}});
  rig.a->set_gcl(gated);
  rig.a->port(0)->enqueue(make_frame("low", MacAddress(0x13), 3, SimTime::ns(0)));
  rig.a->port(0)->enqueue(make_frame("high", MacAddress(0x13), 7, SimTime::ns(0)));
  rig.kernel.run_until(SimTime::ms(2));
  REQUIRE(rig.trace.transmissions.size() >= 2);
  CHECK(rig.trace.transmissions[0].flow_id == "high");
  CHECK(rig.trace.transmissions[0].start_global == SimTime::us(10));
  CHECK(rig.trace.transmissions[1].flow_id == "low");
}

TEST_CASE("a frame that cannot finish before gate close waits for the next cycle") {
  SwitchRig rig;
  // pcp 7 open only during [0, 200us) of each 1 ms cycle.
  GateControlList gated(SimTime::ms(1), SimTime::ns(0),
                        {GclEntry{SimTime::us(200), 0x80}, GclEntry{SimTime::us(800), 0x00}});
  rig.a->set_gcl(gated);
  // Enqueued at 150 us: 50 us of gate left, the frame needs 122.4 us.
  rig.kernel.schedule_at(SimTime::us(150), [&] {
    rig.a->port(0)->enqueue(make_frame("f", MacAddress(0x13), 7, rig.kernel.now()));
  });
  rig.kernel.run_until(SimTime::ms(3));
  REQUIRE(!rig.trace.transmissions.empty());
  CHECK(rig.trace.transmissions[0].start_global == SimTime::ms(1));
  // Held for one period: latency is the hop latency plus the wait.
  REQUIRE(rig.trace.series["f"].samples.size() == 1);
  CHECK(rig.trace.series["f"].samples[0].latency == SimTime::ns(247'900 + 850'000));
}

TEST_CASE("an idle port with an open gate starts transmitting at the enqueue instant") {
  SwitchRig rig;
  rig.kernel.schedule_at(SimTime::us(5), [&] {
    rig.a->port(0)->enqueue(make_frame("f", MacAddress(0x13), 7, rig.kernel.now()));
  });
  rig.kernel.run_until(SimTime::ms(1));
  REQUIRE(!rig.trace.transmissions.empty());
  CHECK(rig.trace.transmissions[0].start_global == SimTime::us(5));
}

TEST_CASE("enqueue on a busy port defers to the transmission end") {
  SwitchRig rig;
  rig.a->port(0)->enqueue(make_frame("f1", MacAddress(0x13), 7, SimTime::ns(0)));
  rig.kernel.schedule_at(SimTime::us(10), [&] {
    rig.a->port(0)->enqueue(make_frame("f2", MacAddress(0x13), 7, rig.kernel.now()));
  });
  rig.kernel.run_until(SimTime::ms(1));
  REQUIRE(rig.trace.transmissions.size() >= 2);
  CHECK(rig.trace.transmissions[1].start_global == SimTime::ns(122'400));
}

TEST_CASE("same-priority frames keep FIFO order end to end") {
  SwitchRig rig;
  for (int i = 0; i < 5; ++i) {
    rig.kernel.schedule_at(SimTime::us(i), [&, i] {
      rig.a->port(0)->enqueue(make_frame("f", MacAddress(0x13), 7, rig.kernel.now()));
    });
  }
  rig.kernel.run_until(SimTime::ms(5));
  const auto& samples = rig.trace.series["f"].samples;
  REQUIRE(samples.size() == 5);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    SimTime created_prev = samples[i - 1].recv_time - samples[i - 1].latency;
    SimTime created_cur = samples[i].recv_time - samples[i].latency;
    CHECK(created_prev < created_cur);
    CHECK(samples[i - 1].recv_time < samples[i].recv_time);
  }
}

TEST_CASE("queue overflow drops are counted against the flow") {
  SwitchRig rig;
  GateControlList closed(SimTime::ms(1), SimTime::ns(0), {GclEntry{SimTime::ms(1), 0x00}});
  rig.a->set_gcl(closed);
  rig.a->port(0)->set_queue_capacity(1);
  rig.a->port(0)->enqueue(make_frame("f", MacAddress(0x13), 7, SimTime::ns(0)));
  bool second = rig.a->port(0)->enqueue(make_frame("f", MacAddress(0x13), 7, SimTime::ns(0)));
  CHECK_FALSE(second);
  CHECK(rig.trace.frames_dropped_overflow == 1);
}

TEST_CASE("replacing a GCL on the running store immediately affects selection") {
  SwitchRig rig;
  const PortId egress = rig.net.port_toward("sw", "node_b");
  // Close the egress gate for pcp 7, queue a frame behind it.
  {
    Request lock{1, 42, LockReq{StoreKind::Running}};
    CHECK(is_ok(rig.sw->handle_netconf(lock)->body));
    Changeset cs;
    cs.edits.push_back(ReplaceGclEdit{
        egress, GateControlList(SimTime::ms(1), SimTime::ns(0), {GclEntry{SimTime::ms(1), 0x7f}})});
    Request edit{2, 42, EditConfigReq{StoreKind::Running, cs}};
    CHECK(is_ok(rig.sw->handle_netconf(edit)->body));
  }
  rig.a->port(0)->enqueue(make_frame("f", MacAddress(0x13), 7, SimTime::ns(0)));
  rig.kernel.run_until(SimTime::ms(5));
  CHECK(rig.trace.series.count("f") == 0);
  CHECK(rig.sw->port(egress)->queue_depth(7) == 1);

  // Reopen at t = 5 ms: the waiting frame goes out at the edit instant.
  rig.kernel.schedule_at(SimTime::ms(5), [&] {
    Changeset cs;
    cs.edits.push_back(ReplaceGclEdit{egress, GateControlList::all_open(SimTime::ms(1))});
    Request edit{3, 42, EditConfigReq{StoreKind::Running, cs}};
    CHECK(is_ok(rig.sw->handle_netconf(edit)->body));
  });
  rig.kernel.run_until(SimTime::ms(10));
  REQUIRE(rig.trace.series.count("f") == 1);
  CHECK(rig.trace.config_applies.size() == 2);
  CHECK_FALSE(rig.trace.config_applies[0].synchronous_commit);
}

TEST_CASE("conservation: every created frame is received or dropped once the network drains") {
  SwitchRig rig;
  int created = 0;
  for (int i = 0; i < 200; ++i) {
    rig.kernel.schedule_at(SimTime::us(37 * i), [&, i] {
      MacAddress dst = (i % 5 == 0) ? MacAddress(0x77) : MacAddress(0x13);  // some unroutable
      Pcp pcp = static_cast<Pcp>(i % kNumPriorities);
      rig.a->port(0)->enqueue(make_frame("mix", dst, pcp, rig.kernel.now()));
      ++created;
    });
  }
  rig.kernel.run_until(SimTime::ms(100));
  CHECK(created == 200);
  CHECK(rig.net.total_queued() == 0);
  std::uint64_t received = rig.trace.frames_received;
  std::uint64_t dropped = rig.trace.frames_dropped();
  CHECK(received + dropped == 200);
  CHECK(dropped == 40);
}
