#pragma once

#include <optional>

#include "tsnsim/netconf_messages.hpp"

namespace tsnsim {

// Per-switch configuration agent: running and candidate datastores,
// exclusive locks, edits, validation, and a commit extended with a
// scheduled execution timestamp. The agent is a plain state machine with
// value semantics; transports, clocks and timers live outside.
class NetconfAgent {
 public:
  enum class FaultPoint : std::uint8_t {
    None,
    DenyLock,       // next Lock(running) fails
    FailCopy,       // next CopyConfig fails, running unchanged
    RejectEdit,     // next EditConfig fails, store unchanged
    NackPrepare,    // next CommitPrepare is nacked
    SwallowRequest, // next request gets no reply (for timeout testing)
  };

  struct Result {
    std::optional<Reply> reply;
    // Set when a commit was released: apply the candidate when the device's
    // local clock reads this instant.
    std::optional<SimTime> schedule_apply_local;
    // Set when the running configuration changed during handling (direct
    // edits on the running store).
    bool running_changed = false;
    // On CommitExecute: device-local time to spare until execute_at.
    // Negative means the release arrived after the agreed instant.
    std::optional<std::int64_t> execute_margin_ns;
  };

  NetconfAgent() = default;
  NetconfAgent(DeviceConfig initial, std::size_t port_count,
               SimTime apply_margin = SimTime::us(10))
      : running_(std::move(initial)), port_count_(port_count), apply_margin_(apply_margin) {}

  Result handle(const Request& req, SimTime local_now);

  // Fires the scheduled synchronous commit. Returns true when the candidate
  // was swapped into running (false when the commit had been cancelled).
  bool fire_apply();

  void inject_fault_once(FaultPoint p) { injected_ = p; }

  const DeviceConfig& running() const { return running_; }
  const std::optional<DeviceConfig>& candidate() const { return candidate_; }
  bool has_candidate() const { return candidate_.has_value(); }
  std::optional<std::uint32_t> running_lock() const { return running_lock_; }
  std::optional<std::uint32_t> candidate_lock() const { return candidate_lock_; }
  bool has_pending_commit() const { return pending_execute_at_.has_value(); }
  std::optional<SimTime> pending_execute_at() const { return pending_execute_at_; }
  // The running store is unavailable to new sessions while a released
  // commit awaits its execution instant.
  bool running_reserved() const { return running_lock_.has_value() || held_for_commit_; }
  bool execute_released() const { return execute_released_; }
  std::size_t port_count() const { return port_count_; }

  // Canonical fingerprint of the full agent state, for state-space
  // exploration and duplicate detection in tests.
  std::string state_digest() const;

  bool operator==(const NetconfAgent&) const = default;

 private:
  bool consume_fault(FaultPoint p) {
    if (injected_ == p) {
      injected_ = FaultPoint::None;
      return true;
    }
    return false;
  }

  Reply make(const Request& req, ReplyBody body) const {
    return Reply{req.msg_id, req.session, std::move(body)};
  }

  ReplyBody do_lock(std::uint32_t session, StoreKind store);
  ReplyBody do_unlock(std::uint32_t session, StoreKind store);

  DeviceConfig running_;
  std::optional<DeviceConfig> candidate_;
  std::optional<std::uint32_t> running_lock_;
  std::optional<std::uint32_t> candidate_lock_;
  // Released commit keeps the running store reserved until it applies.
  bool held_for_commit_ = false;
  std::optional<SimTime> pending_execute_at_;
  bool execute_released_ = false;
  std::size_t port_count_ = 0;
  SimTime apply_margin_ = SimTime::us(10);
  FaultPoint injected_ = FaultPoint::None;
};

}  // namespace tsnsim
