#pragma once

#include <array>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsnsim/frame.hpp"
#include "tsnsim/gcl.hpp"
#include "tsnsim/kernel.hpp"
#include "tsnsim/netconf_agent.hpp"
#include "tsnsim/trace.hpp"

namespace tsnsim {

class Device;

// Per-priority transmission selection algorithm hook. Only the
// always-permit variant ships; credit based shaping and friends would slot
// in here.
enum class TsaKind : std::uint8_t { AlwaysPermit };

// One egress port: eight FIFO queues, a timed gate per priority and
// strict-priority selection among queues whose gate is open and whose head
// frame fits entirely into the remaining open time.
class EgressPort {
 public:
  EgressPort(Kernel& kernel, TraceCollector& trace, DeviceId owner, std::string owner_name,
             PortId id, Link link);

  void connect(Device* peer, PortId peer_ingress);
  void set_gcl_source(std::function<const GateControlList*()> source) { gcl_source_ = std::move(source); }
  void set_queue_capacity(std::size_t frames) { capacity_ = frames; }

  // Appends to queue[pcp]; when the port is idle a selection attempt runs at
  // the same instant. Returns false on queue overflow (frame dropped).
  bool enqueue(Frame frame);

  // Re-evaluates transmission opportunities (config change, gate opening,
  // transmission end).
  void kick();

  PortId id() const { return id_; }
  const Link& link() const { return link_; }
  std::size_t queue_depth(Pcp pcp) const { return queues_[pcp].size(); }
  std::size_t total_queued() const;

 private:
  const GateControlList* gcl() const { return gcl_source_ ? gcl_source_() : nullptr; }
  bool tsa_permits(Pcp pcp) const { return tsa_[pcp] == TsaKind::AlwaysPermit; }
  void start_transmission(Pcp pcp, SimTime local_now);
  void schedule_kick(SimTime at_global);

  Kernel& kernel_;
  TraceCollector& trace_;
  DeviceId owner_;
  std::string owner_name_;
  PortId id_;
  Link link_;
  Device* peer_ = nullptr;
  PortId peer_ingress_ = 0;
  std::function<const GateControlList*()> gcl_source_;
  std::array<std::deque<Frame>, kNumPriorities> queues_;
  std::array<TsaKind, kNumPriorities> tsa_{};
  std::size_t capacity_ = std::numeric_limits<std::size_t>::max();
  SimTime busy_until_;
  std::optional<SimTime> scheduled_kick_;
};

class Device {
 public:
  Device(Kernel& kernel, TraceCollector& trace, DeviceId id, std::string name, MacAddress mac)
      : kernel_(kernel), trace_(trace), id_(id), name_(std::move(name)), mac_(mac) {}
  virtual ~Device() = default;

  DeviceId id() const { return id_; }
  const std::string& name() const { return name_; }
  MacAddress mac() const { return mac_; }
  SimTime local_now() const { return kernel_.local_time(id_); }

  // Called when a frame has been fully received on `ingress`.
  virtual void on_ingress(Frame frame, PortId ingress) = 0;

  virtual EgressPort* port(PortId id) = 0;
  virtual std::size_t port_count() const = 0;

 protected:
  Kernel& kernel_;
  TraceCollector& trace_;

 private:
  DeviceId id_;
  std::string name_;
  MacAddress mac_;
};

// TSN/SDN switch: store-and-forward, flow-table lookup after a fixed
// forwarding delay, NETCONF-managed configuration.
class SwitchDevice : public Device {
 public:
  SwitchDevice(Kernel& kernel, TraceCollector& trace, DeviceId id, std::string name, MacAddress mac,
               SimTime forwarding_delay)
      : Device(kernel, trace, id, std::move(name), mac), forwarding_delay_(forwarding_delay) {}

  EgressPort& add_port(Link link);
  EgressPort* port(PortId id) override { return ports_[id].get(); }
  std::size_t port_count() const override { return ports_.size(); }

  void init_agent(DeviceConfig initial, SimTime apply_margin);
  NetconfAgent& agent() { return agent_; }
  const NetconfAgent& agent() const { return agent_; }

  void on_ingress(Frame frame, PortId ingress) override;

  // NETCONF entry point; returns the reply (if any) to be sent back.
  std::optional<Reply> handle_netconf(const Request& req);

  SimTime forwarding_delay() const { return forwarding_delay_; }

 private:
  void kick_all();
  void record_apply(bool synchronous);

  SimTime forwarding_delay_;
  std::vector<std::unique_ptr<EgressPort>> ports_;
  NetconfAgent agent_;
};

// End station: a single gated egress port, periodic traffic generation on
// the local clock, and latency measurement at reception.
class EndStation : public Device {
 public:
  EndStation(Kernel& kernel, TraceCollector& trace, DeviceId id, std::string name, MacAddress mac)
      : Device(kernel, trace, id, std::move(name), mac) {}

  EgressPort& add_port(Link link);
  EgressPort* port(PortId id) override { return id == 0 ? port_.get() : nullptr; }
  std::size_t port_count() const override { return port_ ? 1 : 0; }

  void set_gcl(GateControlList gcl) { gcl_ = std::move(gcl); }
  const GateControlList& gcl() const { return gcl_; }

  struct Generator {
    std::string flow_id;
    MacAddress dst;
    std::uint16_t vlan = 1;
    Pcp pcp = 7;
    std::int64_t payload_size = 0;
    SimTime period;
    SimTime first_fire_local;  // first creation instant on the local clock
    std::optional<SimTime> horizon_global;
  };
  void start_generator(Generator gen);

  void on_ingress(Frame frame, PortId ingress) override;

 private:
  void fire_generator(std::size_t index, SimTime fire_local);

  std::unique_ptr<EgressPort> port_;
  GateControlList gcl_ = GateControlList::all_open(SimTime::ms(1));
  std::vector<Generator> generators_;
};

// Devices plus links; owns the id space and the wiring.
class Network {
 public:
  Network(Kernel& kernel, TraceCollector& trace) : kernel_(kernel), trace_(trace) {}

  SwitchDevice& add_switch(const std::string& name, MacAddress mac, SimTime forwarding_delay);
  EndStation& add_end_station(const std::string& name, MacAddress mac);

  // Creates one egress port on each side.
  void connect(const std::string& a, const std::string& b, Link link);

  Device* find(const std::string& name);
  SwitchDevice* find_switch(const std::string& name);
  EndStation* find_end_station(const std::string& name);
  DeviceId id_of(const std::string& name) const;
  const std::string& name_of(DeviceId id) const;

  // Egress port of `device` on the link toward `neighbor`.
  PortId port_toward(const std::string& device, const std::string& neighbor) const;

  // Device names along the unique shortest path, inclusive of endpoints.
  std::vector<std::string> path(const std::string& from, const std::string& to) const;

  std::vector<Device*> devices();
  std::size_t total_queued();

 private:
  Kernel& kernel_;
  TraceCollector& trace_;
  std::map<std::string, DeviceId> ids_;
  std::vector<std::unique_ptr<Device>> devices_;
  std::map<std::pair<std::string, std::string>, PortId> port_toward_;
  std::map<std::string, std::vector<std::string>> adjacency_;
};

}  // namespace tsnsim
