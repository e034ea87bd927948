#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsnsim/ids.hpp"
#include "tsnsim/netconf_messages.hpp"

namespace tsnsim {

// Worst-case execution time model of the commit phase. The commit timestamp
// is chosen so that the prepare round trip, the execute release and the
// clock disagreement margin all fit before it:
//
//   W = (d_ctrl_max + p_proc_max)   // CommitPrepare, controller -> switch
//     + (d_ctrl_max + p_proc_max)   // CommitReadyAck, switch -> controller
//     + (d_ctrl_max + p_proc_max)   // CommitExecute, controller -> switch
//     + clock_margin                // device clock error vs the controller
//
// W is independent of the reconfiguration content; the changes are already
// staged in the candidates when the commit phase starts.
struct WcetModel {
  SimTime d_ctrl_max = SimTime::us(250);
  SimTime p_proc_max = SimTime::us(10);
  int n_participants = 1;
  SimTime clock_margin = SimTime::ns(500);

  struct PeriodAlignment {
    SimTime cycle;
    SimTime base;
  };
  // When set, the raw timestamp is rounded up to the next instant congruent
  // to base modulo cycle (the next start of a network period).
  std::optional<PeriodAlignment> alignment;

  SimTime wcet() const { return (d_ctrl_max + p_proc_max) * 3 + clock_margin; }
};

SimTime compute_execute_at(const WcetModel& model, SimTime t_now);

enum class TxnPhase : std::uint8_t { Idle, Locking, Editing, Committing, Unlocking, Done };
enum class TxnOutcome : std::uint8_t {
  Committed,
  AbortedLockDenied,
  AbortedEditRejected,
  AbortedPrepareNacked,
  AbortedTimeout,
  AbortedInternal,
};

const char* phase_name(TxnPhase p);
const char* outcome_name(TxnOutcome o);
inline bool is_committed(TxnOutcome o) { return o == TxnOutcome::Committed; }

// SDN controller hosting the two reconfiguration engines: four-phase
// synchronous transactions (lock, reconfigure, commit, unlock) and the
// non-transactional baseline issuing independent edits against running
// configurations. Pure state machine: all I/O is returned as Actions and
// fed back through handle_reply / handle_timeout, so the same code runs
// under the simulator and under the model-checking interleaving explorer.
class Controller {
 public:
  struct Config {
    WcetModel wcet;
    SimTime phase_timeout = SimTime::ms(10);
    std::uint32_t session_base = 1;
  };

  struct Send {
    DeviceId to;
    Request req;
  };
  struct TimerReq {
    std::uint64_t txn_id;
    std::uint32_t phase_gen;
    SimTime delay;
  };
  struct Completion {
    std::uint64_t id;
    std::string label;
    bool transactional;
    TxnOutcome outcome;
    std::string detail;
  };
  struct Actions {
    std::vector<Send> sends;
    std::vector<TimerReq> timers;
    std::vector<Completion> completions;
  };

  struct ParticipantSpec {
    DeviceId device;
    MacAddress mac;
    Changeset changes;
  };

  // One row per phase for the machine-readable transaction log.
  struct PhaseRecord {
    std::uint64_t txn_id;
    std::string label;
    const char* phase;
    SimTime enter;
    SimTime exit;
    std::string outcome;
  };

  struct TxnStatus {
    std::uint64_t id = 0;
    std::string label;
    TxnPhase phase = TxnPhase::Idle;
    TxnOutcome outcome = TxnOutcome::AbortedInternal;
    bool finished = false;
    SimTime execute_at;
    bool execute_at_set = false;
    std::vector<DeviceId> participants;
  };

  explicit Controller(Config config) : config_(config) {}

  Actions start_transaction(const std::string& label, std::vector<ParticipantSpec> participants,
                            SimTime now, std::uint64_t* id_out = nullptr);

  Actions start_direct_update(const std::string& label, DeviceId device, const Changeset& changes,
                              SimTime now, std::uint64_t* id_out = nullptr);

  Actions handle_reply(const Reply& reply, SimTime now);
  Actions handle_timeout(std::uint64_t txn_id, std::uint32_t phase_gen, SimTime now);

  bool idle() const { return txns_.empty() && directs_.empty(); }
  std::vector<TxnStatus> transactions() const;

  // Canonical fingerprint of every live transaction and in-flight request,
  // independent of message-id numbering, for state-space exploration.
  std::string state_digest() const;
  const std::vector<PhaseRecord>& phase_log() const { return phase_log_; }
  // (transaction id, MAC) in lock-request emission order, for order checks.
  const std::vector<std::pair<std::uint64_t, MacAddress>>& lock_order() const { return lock_order_; }
  std::uint64_t stale_replies() const { return stale_replies_; }

  const Config& config() const { return config_; }

 private:
  enum class Op : std::uint8_t { Lock, Copy, Edit, Validate, Prepare, Execute, Cancel, Unlock };

  struct Pending {
    std::uint64_t txn_id;
    std::size_t participant;
    Op op;
    bool direct;
  };

  struct Participant {
    DeviceId device;
    MacAddress mac;
    Changeset changes;
    int edit_stage = 0;  // 0 copy, 1 edit, 2 validate, 3 staged
    int prepare_state = 0;  // 0 outstanding, 1 acked, 2 nacked
  };

  struct Txn {
    std::uint64_t id;
    std::string label;
    std::uint32_t session;
    TxnPhase phase = TxnPhase::Idle;
    std::uint32_t phase_gen = 0;
    SimTime phase_enter;
    std::vector<Participant> parts;
    std::size_t lock_index = 0;
    std::size_t locks_held = 0;
    SimTime execute_at;
    bool execute_at_set = false;
    std::size_t prepare_replies = 0;
    std::size_t acks = 0;
    bool any_nack = false;
    std::size_t execute_replies = 0;
    std::size_t unlock_expected = 0;
    std::size_t unlock_replies = 0;
    std::size_t unlock_count = 0;  // participants being unlocked
    TxnOutcome outcome = TxnOutcome::Committed;
    bool outcome_set = false;
    const char* fail_phase = nullptr;
    std::string detail;
  };

  struct DirectUpdate {
    std::uint64_t id;
    std::string label;
    std::uint32_t session;
    DeviceId device;
    Changeset changes;
    int stage = 0;  // 0 lock, 1 edit, 2 unlock
    SimTime start;
    bool ok = true;
    std::string detail;
  };

  Request make_request(std::uint32_t session, RequestBody body) {
    return Request{next_msg_id_++, session, std::move(body)};
  }
  void track(std::uint64_t msg_id, std::uint64_t txn, std::size_t part, Op op, bool direct) {
    pending_[msg_id] = Pending{txn, part, op, direct};
  }
  void send_to(Actions& a, Txn& t, std::size_t part, Op op, RequestBody body);
  void enter_phase(Txn& t, TxnPhase phase, SimTime now, Actions& a);
  void fail(Txn& t, TxnOutcome outcome, std::string detail);
  void begin_unlock(Txn& t, SimTime now, Actions& a);
  void finish(Txn& t, SimTime now, Actions& a);
  void begin_editing(Txn& t, SimTime now, Actions& a);
  void begin_commit(Txn& t, SimTime now, Actions& a);

  void on_txn_reply(Txn& t, const Pending& p, const Reply& r, SimTime now, Actions& a);
  void on_direct_reply(DirectUpdate& d, const Pending& p, const Reply& r, SimTime now, Actions& a);

  Config config_;
  std::uint64_t next_msg_id_ = 1;
  std::uint64_t next_id_ = 1;
  std::map<std::uint64_t, Txn> txns_;
  std::map<std::uint64_t, DirectUpdate> directs_;
  std::map<std::uint64_t, Pending> pending_;
  std::vector<PhaseRecord> phase_log_;
  std::vector<std::pair<std::uint64_t, MacAddress>> lock_order_;
  std::vector<TxnStatus> finished_;
  std::uint64_t stale_replies_ = 0;
};

}  // namespace tsnsim
