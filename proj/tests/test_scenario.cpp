#include <doctest.h>

#include "tsnsim/case_study.hpp"
#include "tsnsim/scenario.hpp"
#include "tsnsim/schedule_template.hpp"

using namespace tsnsim;

TEST_CASE("scenario text round-trips through serialize and parse") {
  Scenario s = build_case_study(RunMode::Transactional);
  std::string text = serialize_scenario(s);
  Scenario back = parse_scenario(text);
  CHECK(serialize_scenario(back) == text);
  CHECK(back.flows.size() == 3);
  CHECK(back.devices.size() == 6);
  CHECK(back.mode == RunMode::Transactional);
  CHECK(back.seed == s.seed);
}

TEST_CASE("validation rejects broken scenarios with diagnostics") {
  Scenario s = build_case_study(RunMode::Transactional);

  SUBCASE("unknown device in a flow") {
    s.flows[0].sender = "ghost";
    auto problems = s.validate();
    REQUIRE_FALSE(problems.empty());
    CHECK(problems[0].find("ghost") != std::string::npos);
  }
  SUBCASE("oversized payload") {
    s.flows[0].payload_bytes = 1501;
    CHECK_FALSE(s.validate().empty());
  }
  SUBCASE("period must divide the recorded horizon") {
    s.flows[0].period = SimTime::us(7);
    CHECK_FALSE(s.validate().empty());
  }
  SUBCASE("triggers must increase") {
    s.admissions[1].rules_at = s.admissions[0].rules_at;
    CHECK_FALSE(s.validate().empty());
  }
  SUBCASE("duplicate MACs") {
    s.devices[1].mac = s.devices[0].mac;
    CHECK_FALSE(s.validate().empty());
  }
  SUBCASE("parse of an invalid scenario throws ScenarioError") {
    s.flows[0].payload_bytes = 9999;
    CHECK_THROWS_AS(parse_scenario(serialize_scenario(s)), ScenarioError);
  }
}

TEST_CASE("units are mandatory in scenario files") {
  CHECK_THROWS_AS(parse_scenario("sim_end 500\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("bogus_directive 1\n"), ScenarioError);
}

TEST_CASE("the case study expands to three transactions or six update rounds") {
  Scenario st = build_case_study(RunMode::Transactional);
  ScheduleTemplate tt(st);
  auto script_t = build_update_script(st, tt);
  REQUIRE(script_t.size() == 3);
  CHECK(script_t[0].label == "T1");
  CHECK(script_t[2].label == "T3");
  for (const auto& e : script_t) {
    CHECK(e.transactional);
    CHECK(e.participants.size() == 2);  // both switches join every transaction
  }
  // Flow 2 only touches sw2: its transaction carries an empty sw1 changeset.
  const auto& t2 = script_t[1];
  for (const UpdateStep& step : t2.steps) {
    if (step.device == "sw1") CHECK(step.changes.empty());
    if (step.device == "sw2") CHECK(step.changes.edits.size() == 2);
  }

  Scenario sn = build_case_study(RunMode::NonTransactional);
  ScheduleTemplate tn(sn);
  auto script_n = build_update_script(sn, tn);
  REQUIRE(script_n.size() == 6);
  CHECK(script_n[0].label == "U1");
  CHECK(script_n[5].label == "U6");
  for (const auto& e : script_n) {
    CHECK_FALSE(e.transactional);
  }
  // U3/U4 (flow 2) touch switch2 only.
  CHECK(script_n[2].steps.size() == 1);
  CHECK(script_n[2].steps[0].device == "sw2");
  CHECK(script_n[3].steps.size() == 1);
}

TEST_CASE("the slot grid places every flow's arrival inside its port slot") {
  Scenario s = build_case_study(RunMode::Transactional);
  ScheduleTemplate tmpl(s);
  CHECK(tmpl.sub_slot() == SimTime::ns(122'400));
  CHECK(tmpl.pitch() == SimTime::ns(123'400));
  CHECK(tmpl.lead() == SimTime::ns(1'000));

  // Flow 1 anchors the grid; the later flows are shifted by whole pitches
  // minus their shorter pipelines.
  CHECK(tmpl.generator_phase("flow1") == SimTime::ns(0));
  CHECK(tmpl.generator_phase("flow2") == SimTime::ns(248'850));
  CHECK(tmpl.generator_phase("flow3") == SimTime::ns(246'800));

  // Nominal arrivals at the switch egress ports.
  const auto& hops1 = tmpl.switch_hops("flow1");
  REQUIRE(hops1.size() == 2);
  CHECK(hops1[0].device == "sw1");
  CHECK(hops1[0].arrival_phase == SimTime::ns(125'450));
  CHECK(hops1[1].device == "sw2");
  CHECK(hops1[1].arrival_phase == SimTime::ns(250'900));
  const auto& hops2 = tmpl.switch_hops("flow2");
  REQUIRE(hops2.size() == 1);
  CHECK(hops2[0].arrival_phase == SimTime::ns(250'900 + 123'400));

  CHECK(tmpl.analytic_latency("flow1") == SimTime::ns(373'350));
  CHECK(tmpl.analytic_latency("flow2") == SimTime::ns(247'900));
  CHECK(tmpl.analytic_latency("flow3") == SimTime::ns(373'350));

  // Every admitted flow's transmission window sits inside the open gate.
  for (const char* flow : {"flow1", "flow2", "flow3"}) {
    const FlowSpec* f = s.flow(flow);
    for (const auto& hop : tmpl.switch_hops(flow)) {
      GateControlList gcl = tmpl.switch_port_gcl(hop.device, hop.port, f->slot_index);
      CHECK(gcl.is_open(f->pcp, hop.arrival_phase));
      CHECK(gcl.open_run_remaining(f->pcp, hop.arrival_phase) >= tmpl.sub_slot());
    }
  }

  // The widened slot still excludes the rest of the cycle for pcp 7.
  GateControlList g = tmpl.switch_port_gcl("sw2", tmpl.switch_hops("flow1")[1].port, 2);
  CHECK_FALSE(g.is_open(7, SimTime::ns(0)));
  CHECK_FALSE(g.is_open(7, SimTime::us(800)));
}
