#include "tsnsim/simulation.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "tsnsim/network.hpp"
#include "tsnsim/schedule_template.hpp"

namespace tsnsim {

namespace {

class Simulation {
 public:
  explicit Simulation(const Scenario& scenario)
      : scenario_(scenario), tmpl_(scenario), kernel_(scenario.sync_bound), rng_(scenario.seed),
        net_(kernel_, trace_) {
    trace_.record_start = scenario.record_start;
    build_network();
    build_controller();
    schedule_script();
    start_generators();
  }

  RunResult run() {
    kernel_.run_until(scenario_.sim_end);

    RunResult r;
    r.scenario = scenario_;
    for (const FlowSpec& f : scenario_.flows) {
      r.baselines[f.id] = tmpl_.analytic_latency(f.id);
    }
    r.summary = summarize(trace_.series, r.baselines, scenario_.tolerance);
    for (FlowStats& fs : r.summary.flows) {
      auto it = trace_.flows.find(fs.flow_id);
      if (it != trace_.flows.end()) {
        fs.created = it->second.created;
        fs.dropped = it->second.dropped;
      }
    }
    r.summary.frames_created = trace_.frames_created;
    r.summary.frames_received = trace_.frames_received;
    r.summary.frames_dropped = trace_.frames_dropped();

    for (const Controller::TxnStatus& st : controller_->transactions()) {
      TxnResult t;
      t.id = st.id;
      t.label = st.label;
      t.outcome = st.outcome;
      t.committed = st.finished && is_committed(st.outcome);
      if (st.execute_at_set) t.execute_at = st.execute_at;
      for (DeviceId d : st.participants) t.participants.push_back(net_.name_of(d));
      r.transactions.push_back(t);

      TxnSummary ts;
      ts.label = t.label;
      ts.outcome = outcome_name(t.outcome);
      ts.committed = t.committed;
      ts.commit_instant = t.execute_at;
      r.summary.transactions.push_back(std::move(ts));
      if (!t.committed) r.unexpected_abort = true;
    }
    for (const Controller::Completion& c : completions_) {
      if (!c.transactional && !is_committed(c.outcome)) r.unexpected_abort = true;
    }

    r.phase_log = controller_->phase_log();
    r.completions = completions_;
    for (const auto& rec : trace_.execute_margins) {
      if (rec.margin_ns < 0) ++r.late_executes;
    }
    r.control_draws = draws_;
    r.outstanding_requests = outstanding_.size();
    for (const DeviceSpec& d : scenario_.devices) {
      if (d.kind == DeviceSpec::Kind::Switch) {
        r.final_configs[d.name] = net_.find_switch(d.name)->agent().running().canonical_string();
      }
      r.clock_offsets[d.name] = kernel_.clock_offset(net_.id_of(d.name));
    }
    r.events_processed = kernel_.events_processed();
    r.trace = std::move(trace_);
    return r;
  }

 private:
  void build_network() {
    for (const DeviceSpec& d : scenario_.devices) {
      if (d.kind == DeviceSpec::Kind::Switch) {
        net_.add_switch(d.name, d.mac, d.forwarding_delay);
      } else {
        net_.add_end_station(d.name, d.mac);
      }
      // Constant per-run clock error, uniform in [-sync_bound, +sync_bound].
      std::int64_t b = scenario_.sync_bound.count();
      std::int64_t offset = static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(2 * b + 1)) - b;
      kernel_.register_clock(net_.id_of(d.name), offset);
    }
    for (const LinkSpec& l : scenario_.links) {
      net_.connect(l.a, l.b, Link{l.speed_bps, l.length_m, l.propagation_ns_per_m});
    }
    for (const DeviceSpec& d : scenario_.devices) {
      if (d.kind == DeviceSpec::Kind::Switch) {
        SwitchDevice* sw = net_.find_switch(d.name);
        DeviceConfig initial;
        for (PortId p = 0; p < sw->port_count(); ++p) {
          initial.gcls[p] = GateControlList::all_open(scenario_.schedule.cycle);
        }
        sw->init_agent(std::move(initial), scenario_.control.apply_margin);
      } else {
        EndStation* st = net_.find_end_station(d.name);
        st->set_gcl(tmpl_.end_station_gcl(d.name));
        DeviceConfig cfg;
        if (st->port_count() > 0) cfg.gcls[0] = st->gcl();
        trace_.initial_configs[d.name] = std::move(cfg);
      }
    }
  }

  void build_controller() {
    Controller::Config cfg;
    cfg.wcet.d_ctrl_max = scenario_.control.d_ctrl_max;
    cfg.wcet.p_proc_max = scenario_.control.p_proc;
    cfg.wcet.clock_margin = scenario_.sync_bound;
    cfg.wcet.n_participants = 0;
    for (const DeviceSpec& d : scenario_.devices) {
      if (d.kind == DeviceSpec::Kind::Switch) ++cfg.wcet.n_participants;
    }
    if (scenario_.schedule.align_commit_to_period) {
      cfg.wcet.alignment = WcetModel::PeriodAlignment{scenario_.schedule.cycle, SimTime::ns(0)};
    }
    cfg.phase_timeout = scenario_.control.phase_timeout;
    controller_ = std::make_unique<Controller>(cfg);
  }

  void schedule_script() {
    for (const ScriptEntry& entry : build_update_script(scenario_, tmpl_)) {
      kernel_.schedule_at(entry.trigger, [this, entry] {
        if (entry.transactional) {
          std::vector<Controller::ParticipantSpec> specs;
          for (const std::string& name : entry.participants) {
            Controller::ParticipantSpec ps;
            ps.device = net_.id_of(name);
            ps.mac = scenario_.device(name)->mac;
            for (const UpdateStep& step : entry.steps) {
              if (step.device == name) ps.changes = step.changes;
            }
            specs.push_back(std::move(ps));
          }
          process_actions(controller_->start_transaction(entry.label, std::move(specs), kernel_.now()));
        } else {
          for (const UpdateStep& step : entry.steps) {
            std::string label = entry.steps.size() > 1 ? entry.label + "." + step.device : entry.label;
            process_actions(controller_->start_direct_update(label, net_.id_of(step.device),
                                                             step.changes, kernel_.now()));
          }
        }
      });
    }
  }

  void start_generators() {
    for (const FlowSpec& f : scenario_.flows) {
      EndStation* sender = net_.find_end_station(f.sender);
      if (!sender) throw SimError("flow " + f.id + " sender is not an end station");
      SimTime phase = tmpl_.generator_phase(f.id);
      // First creation at the first sub-slot start at or after start_offset.
      SimTime first = phase;
      if (first < f.start_offset) {
        std::int64_t periods = (f.start_offset - phase + f.period - SimTime::ns(1)).count() / f.period.count();
        first = phase + f.period * periods;
      }
      EndStation::Generator gen;
      gen.flow_id = f.id;
      gen.dst = scenario_.device(f.receiver)->mac;
      gen.vlan = f.vlan;
      gen.pcp = f.pcp;
      gen.payload_size = f.payload_bytes;
      gen.period = f.period;
      gen.first_fire_local = first;
      gen.horizon_global = scenario_.sim_end;
      sender->start_generator(std::move(gen));
    }
  }

  SimTime draw_latency() {
    ++draws_;
    std::int64_t lo = scenario_.control.d_ctrl_min.count();
    std::int64_t hi = scenario_.control.d_ctrl_max.count();
    if (hi <= lo) return SimTime::ns(lo);
    return SimTime::ns(lo + static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)));
  }

  void log_message(SimTime at, const char* dir, const char* msg, const std::string& device,
                   std::uint64_t msg_id) {
    std::ostringstream line;
    line << at.count() << " " << dir << " " << msg << " " << device << " " << msg_id;
    trace_.control_log.push_back(line.str());
  }

  // Reliable ordered channel: uniformly drawn per-message latency, FIFO
  // enforced per device and direction.
  void send_request(const std::string& device, Request req, SimTime enter_channel) {
    SimTime delivery = enter_channel + draw_latency();
    SimTime& last = last_to_device_[device];
    if (delivery < last) delivery = last;
    last = delivery;
    outstanding_.insert(req.msg_id);
    kernel_.schedule_at(delivery, [this, device, req = std::move(req)] {
      log_message(kernel_.now(), "c2d", request_name(req.body), device, req.msg_id);
      SwitchDevice* sw = net_.find_switch(device);
      auto reply = sw->handle_netconf(req);
      if (reply) {
        send_reply(device, *reply, kernel_.now() + scenario_.control.p_proc);
      }
    });
  }

  void send_reply(const std::string& device, Reply rep, SimTime enter_channel) {
    SimTime delivery = enter_channel + draw_latency();
    SimTime& last = last_to_controller_[device];
    if (delivery < last) delivery = last;
    last = delivery;
    kernel_.schedule_at(delivery, [this, device, rep] {
      log_message(kernel_.now(), "d2c", reply_name(rep.body), device, rep.msg_id);
      outstanding_.erase(rep.msg_id);
      process_actions(controller_->handle_reply(rep, kernel_.now()));
    });
  }

  void process_actions(Controller::Actions actions) {
    SimTime enter = kernel_.now() + scenario_.control.p_proc;
    for (Controller::Send& s : actions.sends) {
      send_request(net_.name_of(s.to), std::move(s.req), enter);
    }
    for (const Controller::TimerReq& t : actions.timers) {
      kernel_.schedule_after(t.delay, [this, t] {
        process_actions(controller_->handle_timeout(t.txn_id, t.phase_gen, kernel_.now()));
      });
    }
    for (Controller::Completion& c : actions.completions) {
      completions_.push_back(std::move(c));
    }
  }

  const Scenario& scenario_;
  ScheduleTemplate tmpl_;
  Kernel kernel_;
  std::mt19937_64 rng_;
  TraceCollector trace_;
  Network net_;
  std::unique_ptr<Controller> controller_;
  std::map<std::string, SimTime> last_to_device_;
  std::map<std::string, SimTime> last_to_controller_;
  std::set<std::uint64_t> outstanding_;
  std::vector<Controller::Completion> completions_;
  std::uint64_t draws_ = 0;
};

}  // namespace

std::map<std::string, SimTime> analytic_baselines(const Scenario& scenario) {
  ScheduleTemplate tmpl(scenario);
  std::map<std::string, SimTime> out;
  for (const FlowSpec& f : scenario.flows) {
    out[f.id] = tmpl.analytic_latency(f.id);
  }
  return out;
}

RunResult run_scenario(const Scenario& scenario) {
  auto problems = scenario.validate();
  if (!problems.empty()) {
    throw ScenarioError(std::move(problems));
  }
  Simulation sim(scenario);
  return sim.run();
}

void write_outputs(const RunResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto write_file = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw SimError("cannot write " + name + " in " + out_dir);
    out << content;
  };

  for (const FlowSpec& f : result.scenario.flows) {
    const FlowSeries* s = result.series(f.id);
    FlowSeries empty;
    empty.flow_id = f.id;
    write_file("latency_" + f.id + ".csv", series_to_csv(s ? *s : empty));
  }
  write_file("summary.json", summary_to_json(result.summary));

  std::ostringstream control;
  for (const std::string& line : result.trace.control_log) {
    control << line << "\n";
  }
  write_file("control_log.txt", control.str());

  std::ostringstream txns;
  txns << "txn_id,phase,enter_time_ns,exit_time_ns,outcome\n";
  for (const Controller::PhaseRecord& p : result.phase_log) {
    txns << p.label << "," << p.phase << "," << p.enter.count() << "," << p.exit.count() << ","
         << p.outcome << "\n";
  }
  write_file("transactions.csv", txns.str());
}

}  // namespace tsnsim
