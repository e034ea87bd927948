#include "tsnsim/network.hpp"

#include <algorithm>
#include <queue>

namespace tsnsim {

// ---- EgressPort ----

EgressPort::EgressPort(Kernel& kernel, TraceCollector& trace, DeviceId owner, std::string owner_name,
                       PortId id, Link link)
    : kernel_(kernel), trace_(trace), owner_(owner), owner_name_(std::move(owner_name)), id_(id),
      link_(link) {}

void EgressPort::connect(Device* peer, PortId peer_ingress) {
  peer_ = peer;
  peer_ingress_ = peer_ingress;
}

std::size_t EgressPort::total_queued() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

bool EgressPort::enqueue(Frame frame) {
  if (frame.pcp >= kNumPriorities) {
    throw SimError("frame with invalid pcp " + std::to_string(frame.pcp));
  }
  if (queues_[frame.pcp].size() >= capacity_) {
    ++trace_.frames_dropped_overflow;
    ++trace_.flows[frame.flow_id].dropped;
    return false;
  }
  queues_[frame.pcp].push_back(std::move(frame));
  kick();
  return true;
}

void EgressPort::schedule_kick(SimTime at_global) {
  if (scheduled_kick_ && *scheduled_kick_ <= at_global && *scheduled_kick_ > kernel_.now()) {
    return;  // an earlier or equal kick is already pending
  }
  scheduled_kick_ = at_global;
  kernel_.schedule_at(at_global, [this] { kick(); });
}

void EgressPort::kick() {
  SimTime now = kernel_.now();
  if (busy_until_ > now) {
    schedule_kick(busy_until_);
    return;
  }
  SimTime local_now = kernel_.local_time(owner_);
  const GateControlList* g = gcl();

  // Strict priority among queues whose gate is open and whose head frame
  // completes before its gate closes.
  for (int pcp = kNumPriorities - 1; pcp >= 0; --pcp) {
    auto& q = queues_[pcp];
    if (q.empty() || !tsa_permits(static_cast<Pcp>(pcp))) continue;
    SimTime tx = link_.transmission_duration(q.front());
    if (g) {
      if (!g->is_open(static_cast<Pcp>(pcp), local_now)) continue;
      SimTime run = g->open_run_remaining(static_cast<Pcp>(pcp), local_now);
      if (run < g->cycle_duration() && run < tx) continue;  // would overrun the gate close
    }
    start_transmission(static_cast<Pcp>(pcp), local_now);
    return;
  }

  // Nothing eligible now: wake up at the earliest instant any head frame fits.
  if (!g) return;
  std::optional<SimTime> next_local;
  for (int pcp = kNumPriorities - 1; pcp >= 0; --pcp) {
    auto& q = queues_[pcp];
    if (q.empty() || !tsa_permits(static_cast<Pcp>(pcp))) continue;
    SimTime tx = link_.transmission_duration(q.front());
    auto t = g->earliest_fit(static_cast<Pcp>(pcp), tx, local_now);
    if (t && (!next_local || *t < *next_local)) next_local = t;
  }
  if (next_local && *next_local > local_now) {
    schedule_kick(kernel_.local_to_global(owner_, *next_local));
  }
}

void EgressPort::start_transmission(Pcp pcp, SimTime local_now) {
  Frame frame = std::move(queues_[pcp].front());
  queues_[pcp].pop_front();
  SimTime now = kernel_.now();
  SimTime tx = link_.transmission_duration(frame);
  busy_until_ = now + tx;

  trace_.transmissions.push_back(TransmissionRecord{owner_name_, id_, pcp, frame.flow_id, now,
                                                    now + tx, local_now, local_now + tx});

  schedule_kick(busy_until_);
  SimTime arrival = busy_until_ + link_.propagation_delay();
  Device* peer = peer_;
  PortId ingress = peer_ingress_;
  kernel_.schedule_at(arrival, [peer, ingress, f = std::move(frame)]() mutable {
    peer->on_ingress(std::move(f), ingress);
  });
}

// ---- SwitchDevice ----

EgressPort& SwitchDevice::add_port(Link link) {
  PortId pid = static_cast<PortId>(ports_.size());
  ports_.push_back(std::make_unique<EgressPort>(kernel_, trace_, id(), name(), pid, link));
  EgressPort* raw = ports_.back().get();
  raw->set_gcl_source([this, pid]() { return agent_.running().gcl_for(pid); });
  return *raw;
}

void SwitchDevice::init_agent(DeviceConfig initial, SimTime apply_margin) {
  agent_ = NetconfAgent(std::move(initial), ports_.size(), apply_margin);
  trace_.initial_configs[name()] = agent_.running();
}

void SwitchDevice::on_ingress(Frame frame, PortId) {
  // Store-and-forward: the frame is fully received here; the lookup result
  // becomes visible after the forwarding delay.
  kernel_.schedule_after(forwarding_delay_, [this, f = std::move(frame)]() mutable {
    auto action = agent_.running().flow_table.lookup(f);
    if (action) {
      if (const auto* fwd = std::get_if<ForwardAction>(&*action)) {
        ports_[fwd->port]->enqueue(std::move(f));
        return;
      }
    }
    ++trace_.frames_dropped_no_match;
    ++trace_.flows[f.flow_id].dropped;
  });
}

void SwitchDevice::kick_all() {
  for (auto& p : ports_) p->kick();
}

void SwitchDevice::record_apply(bool synchronous) {
  trace_.config_applies.push_back(
      ConfigApplyRecord{name(), kernel_.now(), local_now(), synchronous, agent_.running()});
}

std::optional<Reply> SwitchDevice::handle_netconf(const Request& req) {
  NetconfAgent::Result r = agent_.handle(req, local_now());
  if (r.running_changed) {
    record_apply(false);
    kick_all();
  }
  if (r.execute_margin_ns) {
    trace_.execute_margins.push_back(ExecuteMarginRecord{name(), *r.execute_margin_ns});
  }
  if (r.schedule_apply_local) {
    SimTime apply_global = kernel_.local_to_global(id(), *r.schedule_apply_local);
    if (apply_global < kernel_.now()) apply_global = kernel_.now();  // late release
    kernel_.schedule_at(apply_global, [this] {
      if (agent_.fire_apply()) {
        record_apply(true);
        kick_all();
      }
    });
  }
  return r.reply;
}

// ---- EndStation ----

EgressPort& EndStation::add_port(Link link) {
  port_ = std::make_unique<EgressPort>(kernel_, trace_, id(), name(), 0, link);
  port_->set_gcl_source([this]() { return &gcl_; });
  return *port_;
}

void EndStation::on_ingress(Frame frame, PortId) {
  if (frame.dst_mac != mac()) {
    ++trace_.frames_dropped_no_match;
    ++trace_.flows[frame.flow_id].dropped;
    return;
  }
  frame.received_at = kernel_.now();
  trace_.record_sample(frame.flow_id, frame.received_at, frame.received_at - frame.created_at);
}

void EndStation::start_generator(Generator gen) {
  generators_.push_back(std::move(gen));
  std::size_t index = generators_.size() - 1;
  const Generator& g = generators_.back();
  kernel_.schedule_at(kernel_.local_to_global(id(), g.first_fire_local),
                      [this, index, fire = g.first_fire_local] { fire_generator(index, fire); });
}

void EndStation::fire_generator(std::size_t index, SimTime fire_local) {
  const Generator& g = generators_[index];
  ++trace_.generator_fires;
  ++trace_.frames_created;
  ++trace_.flows[g.flow_id].created;

  Frame f;
  f.src_mac = mac();
  f.dst_mac = g.dst;
  f.vlan_id = g.vlan;
  f.pcp = g.pcp;
  f.payload_size = g.payload_size;
  f.flow_id = g.flow_id;
  f.created_at = kernel_.now();
  port_->enqueue(std::move(f));

  SimTime next_local = fire_local + g.period;
  SimTime next_global = kernel_.local_to_global(id(), next_local);
  if (g.horizon_global && next_global > *g.horizon_global) return;
  kernel_.schedule_at(next_global, [this, index, next_local] { fire_generator(index, next_local); });
}

// ---- Network ----

SwitchDevice& Network::add_switch(const std::string& name, MacAddress mac, SimTime forwarding_delay) {
  DeviceId id = static_cast<DeviceId>(devices_.size());
  ids_[name] = id;
  devices_.push_back(std::make_unique<SwitchDevice>(kernel_, trace_, id, name, mac, forwarding_delay));
  return static_cast<SwitchDevice&>(*devices_.back());
}

EndStation& Network::add_end_station(const std::string& name, MacAddress mac) {
  DeviceId id = static_cast<DeviceId>(devices_.size());
  ids_[name] = id;
  devices_.push_back(std::make_unique<EndStation>(kernel_, trace_, id, name, mac));
  return static_cast<EndStation&>(*devices_.back());
}

void Network::connect(const std::string& a, const std::string& b, Link link) {
  Device* da = find(a);
  Device* db = find(b);
  if (!da || !db) throw SimError("link references unknown device " + (da ? b : a));

  auto add_egress = [&](Device* dev) -> EgressPort& {
    if (auto* sw = dynamic_cast<SwitchDevice*>(dev)) return sw->add_port(link);
    return static_cast<EndStation*>(dev)->add_port(link);
  };
  EgressPort& pa = add_egress(da);
  EgressPort& pb = add_egress(db);
  pa.connect(db, pb.id());
  pb.connect(da, pa.id());
  port_toward_[{a, b}] = pa.id();
  port_toward_[{b, a}] = pb.id();
  adjacency_[a].push_back(b);
  adjacency_[b].push_back(a);
}

Device* Network::find(const std::string& name) {
  auto it = ids_.find(name);
  return it == ids_.end() ? nullptr : devices_[it->second].get();
}

SwitchDevice* Network::find_switch(const std::string& name) {
  return dynamic_cast<SwitchDevice*>(find(name));
}

EndStation* Network::find_end_station(const std::string& name) {
  return dynamic_cast<EndStation*>(find(name));
}

DeviceId Network::id_of(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw SimError("unknown device " + name);
  return it->second;
}

const std::string& Network::name_of(DeviceId id) const {
  return devices_.at(id)->name();
}

PortId Network::port_toward(const std::string& device, const std::string& neighbor) const {
  auto it = port_toward_.find({device, neighbor});
  if (it == port_toward_.end()) {
    throw SimError("no link between " + device + " and " + neighbor);
  }
  return it->second;
}

std::vector<std::string> Network::path(const std::string& from, const std::string& to) const {
  std::map<std::string, std::string> parent;
  std::queue<std::string> frontier;
  frontier.push(from);
  parent[from] = from;
  while (!frontier.empty()) {
    std::string cur = frontier.front();
    frontier.pop();
    if (cur == to) break;
    auto it = adjacency_.find(cur);
    if (it == adjacency_.end()) continue;
    for (const std::string& next : it->second) {
      if (!parent.contains(next)) {
        parent[next] = cur;
        frontier.push(next);
      }
    }
  }
  if (!parent.contains(to)) throw SimError("no path from " + from + " to " + to);
  std::vector<std::string> out;
  for (std::string cur = to;; cur = parent[cur]) {
    out.push_back(cur);
    if (cur == from) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Device*> Network::devices() {
  std::vector<Device*> out;
  out.reserve(devices_.size());
  for (auto& d : devices_) out.push_back(d.get());
  return out;
}

std::size_t Network::total_queued() {
  std::size_t n = 0;
  for (auto& d : devices_) {
    for (std::size_t i = 0; i < d->port_count(); ++i) {
      n += d->port(static_cast<PortId>(i))->total_queued();
    }
  }
  return n;
}

}  // namespace tsnsim
