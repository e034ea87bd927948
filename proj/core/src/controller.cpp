#include "tsnsim/controller.hpp"

#include <algorithm>

namespace tsnsim {

SimTime compute_execute_at(const WcetModel& model, SimTime t_now) {
  SimTime w = model.wcet();
  if (w <= SimTime::ns(0)) {
    throw SimError("WCET must be strictly positive");
  }
  SimTime raw = t_now + w;
  if (model.alignment) {
    const auto& al = *model.alignment;
    std::int64_t rem = (raw - al.base).count() % al.cycle.count();
    if (rem < 0) rem += al.cycle.count();
    if (rem != 0) {
      raw += SimTime::ns(al.cycle.count() - rem);
    }
  }
  return raw;
}

const char* phase_name(TxnPhase p) {
  switch (p) {
    case TxnPhase::Idle: return "idle";
    case TxnPhase::Locking: return "lock";
    case TxnPhase::Editing: return "reconfiguration";
    case TxnPhase::Committing: return "commit";
    case TxnPhase::Unlocking: return "unlock";
    case TxnPhase::Done: return "done";
  }
  return "?";
}

const char* outcome_name(TxnOutcome o) {
  switch (o) {
    case TxnOutcome::Committed: return "committed";
    case TxnOutcome::AbortedLockDenied: return "aborted_lock_denied";
    case TxnOutcome::AbortedEditRejected: return "aborted_edit_rejected";
    case TxnOutcome::AbortedPrepareNacked: return "aborted_prepare_nacked";
    case TxnOutcome::AbortedTimeout: return "aborted_timeout";
    case TxnOutcome::AbortedInternal: return "aborted_internal";
  }
  return "?";
}

void Controller::send_to(Actions& a, Txn& t, std::size_t part, Op op, RequestBody body) {
  Request req = make_request(t.session, std::move(body));
  track(req.msg_id, t.id, part, op, false);
  if (op == Op::Lock) {
    lock_order_.emplace_back(t.id, t.parts[part].mac);
  }
  a.sends.push_back(Send{t.parts[part].device, std::move(req)});
}

void Controller::enter_phase(Txn& t, TxnPhase phase, SimTime now, Actions& a) {
  if (t.phase != TxnPhase::Idle) {
    const char* exited = phase_name(t.phase);
    const bool failed_here = t.outcome_set && t.fail_phase == exited;
    phase_log_.push_back(PhaseRecord{t.id, t.label, exited, t.phase_enter, now,
                                     failed_here ? outcome_name(t.outcome) : "ok"});
  }
  t.phase = phase;
  t.phase_enter = now;
  ++t.phase_gen;
  if (phase != TxnPhase::Done) {
    a.timers.push_back(TimerReq{t.id, t.phase_gen, config_.phase_timeout});
  }
}

void Controller::fail(Txn& t, TxnOutcome outcome, std::string detail) {
  if (!t.outcome_set) {
    t.outcome = outcome;
    t.outcome_set = true;
    t.fail_phase = phase_name(t.phase);
    t.detail = std::move(detail);
  }
}

void Controller::begin_unlock(Txn& t, SimTime now, Actions& a) {
  enter_phase(t, TxnPhase::Unlocking, now, a);
  // After a lock-phase failure only the already-held prefix is released, in
  // reverse acquisition order; no candidates exist yet. In every other case
  // all participants are unlocked: candidate first (dropping unconfirmed
  // changes), then running.
  t.unlock_expected = 0;
  t.unlock_replies = 0;
  if (t.locks_held < t.parts.size()) {
    t.unlock_count = t.locks_held;
    for (std::size_t i = t.locks_held; i-- > 0;) {
      send_to(a, t, i, Op::Unlock, UnlockReq{StoreKind::Running});
      t.unlock_expected += 1;
    }
  } else {
    t.unlock_count = t.parts.size();
    for (std::size_t i = 0; i < t.parts.size(); ++i) {
      send_to(a, t, i, Op::Unlock, UnlockReq{StoreKind::Candidate});
      send_to(a, t, i, Op::Unlock, UnlockReq{StoreKind::Running});
      t.unlock_expected += 2;
    }
  }
  if (t.unlock_expected == 0) {
    finish(t, now, a);
  }
}

void Controller::finish(Txn& t, SimTime now, Actions& a) {
  if (!t.outcome_set) {
    t.outcome = TxnOutcome::Committed;
    t.outcome_set = true;
  }
  enter_phase(t, TxnPhase::Done, now, a);
  phase_log_.push_back(PhaseRecord{t.id, t.label, "done", now, now, outcome_name(t.outcome)});
  a.completions.push_back(Completion{t.id, t.label, true, t.outcome, t.detail});
  TxnStatus st;
  st.id = t.id;
  st.label = t.label;
  st.phase = TxnPhase::Done;
  st.outcome = t.outcome;
  st.finished = true;
  st.execute_at = t.execute_at;
  st.execute_at_set = t.execute_at_set;
  for (const Participant& p : t.parts) st.participants.push_back(p.device);
  finished_.push_back(std::move(st));
  txns_.erase(t.id);
}

void Controller::begin_editing(Txn& t, SimTime now, Actions& a) {
  enter_phase(t, TxnPhase::Editing, now, a);
  for (std::size_t i = 0; i < t.parts.size(); ++i) {
    t.parts[i].edit_stage = 0;
    send_to(a, t, i, Op::Copy, CopyConfigReq{});
  }
}

void Controller::begin_commit(Txn& t, SimTime now, Actions& a) {
  enter_phase(t, TxnPhase::Committing, now, a);
  t.execute_at = compute_execute_at(config_.wcet, now);
  t.execute_at_set = true;
  // Parallel fan-out: the same agreed timestamp goes to every participant
  // and is interpreted on each device's local clock.
  for (std::size_t i = 0; i < t.parts.size(); ++i) {
    t.parts[i].prepare_state = 0;
    send_to(a, t, i, Op::Prepare, CommitPrepareReq{t.execute_at});
  }
}

Controller::Actions Controller::start_transaction(const std::string& label,
                                                  std::vector<ParticipantSpec> participants,
                                                  SimTime now, std::uint64_t* id_out) {
  Actions a;
  if (participants.empty()) {
    throw SimError("transaction needs at least one participant");
  }
  std::uint64_t id = next_id_++;
  if (id_out) *id_out = id;
  Txn& t = txns_[id];
  t.id = id;
  t.label = label;
  t.session = static_cast<std::uint32_t>(config_.session_base + id);
  // Deadlock avoidance: participants are always locked in ascending MAC
  // address order, regardless of the order they were handed to us.
  std::sort(participants.begin(), participants.end(),
            [](const ParticipantSpec& x, const ParticipantSpec& y) { return x.mac < y.mac; });
  for (ParticipantSpec& p : participants) {
    t.parts.push_back(Participant{p.device, p.mac, std::move(p.changes)});
  }
  t.phase_enter = now;
  enter_phase(t, TxnPhase::Locking, now, a);
  send_to(a, t, 0, Op::Lock, LockReq{StoreKind::Running});
  return a;
}

Controller::Actions Controller::start_direct_update(const std::string& label, DeviceId device,
                                                    const Changeset& changes, SimTime now,
                                                    std::uint64_t* id_out) {
  Actions a;
  std::uint64_t id = next_id_++;
  if (id_out) *id_out = id;
  DirectUpdate& d = directs_[id];
  d.id = id;
  d.label = label;
  d.session = static_cast<std::uint32_t>(config_.session_base + id);
  d.device = device;
  d.changes = changes;
  d.start = now;
  Request req = make_request(d.session, LockReq{StoreKind::Running});
  track(req.msg_id, id, 0, Op::Lock, true);
  a.sends.push_back(Send{device, std::move(req)});
  return a;
}

Controller::Actions Controller::handle_reply(const Reply& reply, SimTime now) {
  Actions a;
  auto it = pending_.find(reply.msg_id);
  if (it == pending_.end()) {
    ++stale_replies_;
    return a;
  }
  Pending p = it->second;
  pending_.erase(it);

  if (p.direct) {
    auto dit = directs_.find(p.txn_id);
    if (dit == directs_.end()) {
      ++stale_replies_;
      return a;
    }
    on_direct_reply(dit->second, p, reply, now, a);
    return a;
  }

  auto tit = txns_.find(p.txn_id);
  if (tit == txns_.end()) {
    ++stale_replies_;
    return a;
  }
  on_txn_reply(tit->second, p, reply, now, a);
  return a;
}

void Controller::on_txn_reply(Txn& t, const Pending& p, const Reply& r, SimTime now, Actions& a) {
  const bool ok = is_ok(r.body);
  switch (p.op) {
    case Op::Lock: {
      if (t.phase != TxnPhase::Locking) { ++stale_replies_; return; }
      if (!ok) {
        fail(t, TxnOutcome::AbortedLockDenied,
             "lock denied by participant " + std::to_string(p.participant));
        begin_unlock(t, now, a);
        return;
      }
      ++t.locks_held;
      ++t.lock_index;
      if (t.lock_index < t.parts.size()) {
        send_to(a, t, t.lock_index, Op::Lock, LockReq{StoreKind::Running});
      } else {
        begin_editing(t, now, a);
      }
      return;
    }
    case Op::Copy:
    case Op::Edit:
    case Op::Validate: {
      if (t.phase != TxnPhase::Editing) { ++stale_replies_; return; }
      if (!ok) {
        const char* what = p.op == Op::Copy ? "copy" : (p.op == Op::Edit ? "edit" : "validate");
        fail(t, TxnOutcome::AbortedEditRejected,
             std::string(what) + " rejected by participant " + std::to_string(p.participant));
        begin_unlock(t, now, a);
        return;
      }
      Participant& part = t.parts[p.participant];
      if (p.op == Op::Copy) {
        part.edit_stage = 1;
        send_to(a, t, p.participant, Op::Edit,
                EditConfigReq{StoreKind::Candidate, part.changes});
      } else if (p.op == Op::Edit) {
        part.edit_stage = 2;
        send_to(a, t, p.participant, Op::Validate, ValidateReq{StoreKind::Candidate});
      } else {
        part.edit_stage = 3;
        bool all_staged = std::all_of(t.parts.begin(), t.parts.end(),
                                      [](const Participant& q) { return q.edit_stage == 3; });
        if (all_staged) {
          begin_commit(t, now, a);
        }
      }
      return;
    }
    case Op::Prepare: {
      if (t.phase != TxnPhase::Committing) { ++stale_replies_; return; }
      ++t.prepare_replies;
      if (is_ready_ack(r.body)) {
        t.parts[p.participant].prepare_state = 1;
        ++t.acks;
      } else {
        t.parts[p.participant].prepare_state = 2;
        t.any_nack = true;
        std::string why = "prepare nacked by participant " + std::to_string(p.participant);
        if (const auto* nack = std::get_if<CommitNackRep>(&r.body)) {
          why += std::string(": ") + nack_reason_name(nack->reason);
        }
        fail(t, TxnOutcome::AbortedPrepareNacked, why);
      }
      if (t.prepare_replies == t.parts.size()) {
        if (!t.any_nack) {
          for (std::size_t i = 0; i < t.parts.size(); ++i) {
            send_to(a, t, i, Op::Execute, CommitExecuteReq{});
          }
        } else {
          // Cancel only where something is prepared.
          for (std::size_t i = 0; i < t.parts.size(); ++i) {
            if (t.parts[i].prepare_state == 1) {
              send_to(a, t, i, Op::Cancel, CommitCancelReq{});
            }
          }
          begin_unlock(t, now, a);
        }
      }
      return;
    }
    case Op::Execute: {
      if (t.phase != TxnPhase::Committing) { ++stale_replies_; return; }
      if (!ok) {
        fail(t, TxnOutcome::AbortedInternal,
             "commit release rejected by participant " + std::to_string(p.participant));
        begin_unlock(t, now, a);
        return;
      }
      ++t.execute_replies;
      if (t.execute_replies == t.parts.size()) {
        begin_unlock(t, now, a);  // outcome stays Committed
      }
      return;
    }
    case Op::Cancel:
      return;  // acknowledgement only
    case Op::Unlock: {
      if (t.phase != TxnPhase::Unlocking) { ++stale_replies_; return; }
      ++t.unlock_replies;
      if (t.unlock_replies == t.unlock_expected) {
        finish(t, now, a);
      }
      return;
    }
  }
}

void Controller::on_direct_reply(DirectUpdate& d, const Pending& p, const Reply& r, SimTime now,
                                 Actions& a) {
  const bool ok = is_ok(r.body);
  switch (p.op) {
    case Op::Lock: {
      if (!ok) {
        d.ok = false;
        d.detail = "lock denied";
        phase_log_.push_back(PhaseRecord{d.id, d.label, "direct", d.start, now, "failed_lock"});
        a.completions.push_back(Completion{d.id, d.label, false, TxnOutcome::AbortedLockDenied, d.detail});
        directs_.erase(d.id);
        return;
      }
      Request req = make_request(d.session, EditConfigReq{StoreKind::Running, d.changes});
      track(req.msg_id, d.id, 0, Op::Edit, true);
      a.sends.push_back(Send{d.device, std::move(req)});
      return;
    }
    case Op::Edit: {
      if (!ok) {
        d.ok = false;
        d.detail = "edit rejected";
      }
      Request req = make_request(d.session, UnlockReq{StoreKind::Running});
      track(req.msg_id, d.id, 0, Op::Unlock, true);
      a.sends.push_back(Send{d.device, std::move(req)});
      return;
    }
    case Op::Unlock: {
      phase_log_.push_back(
          PhaseRecord{d.id, d.label, "direct", d.start, now, d.ok ? "applied" : "failed_edit"});
      a.completions.push_back(Completion{d.id, d.label, false,
                                         d.ok ? TxnOutcome::Committed : TxnOutcome::AbortedEditRejected,
                                         d.detail});
      directs_.erase(d.id);
      return;
    }
    default:
      ++stale_replies_;
      return;
  }
}

Controller::Actions Controller::handle_timeout(std::uint64_t txn_id, std::uint32_t phase_gen,
                                               SimTime now) {
  Actions a;
  auto it = txns_.find(txn_id);
  if (it == txns_.end() || it->second.phase_gen != phase_gen) {
    return a;  // stale timer
  }
  Txn& t = it->second;
  fail(t, TxnOutcome::AbortedTimeout, std::string("timeout in phase ") + phase_name(t.phase));
  if (t.phase == TxnPhase::Unlocking) {
    finish(t, now, a);  // stop waiting for unlock replies
  } else {
    begin_unlock(t, now, a);
  }
  return a;
}

std::string Controller::state_digest() const {
  std::string d;
  for (const auto& [id, t] : txns_) {
    d += "txn" + std::to_string(id) + ":" + phase_name(t.phase);
    d += " li=" + std::to_string(t.lock_index) + " lh=" + std::to_string(t.locks_held);
    for (const Participant& p : t.parts) {
      d += " e" + std::to_string(p.edit_stage) + "p" + std::to_string(p.prepare_state);
    }
    d += " pr=" + std::to_string(t.prepare_replies) + " ak=" + std::to_string(t.acks);
    d += t.any_nack ? "N" : "";
    d += " ex=" + std::to_string(t.execute_replies) + " ul=" + std::to_string(t.unlock_replies) +
         "/" + std::to_string(t.unlock_expected);
    d += t.outcome_set ? std::string(" out=") + outcome_name(t.outcome) : "";
    d += ";";
  }
  for (const auto& [id, u] : directs_) {
    d += "dir" + std::to_string(id) + ":" + std::to_string(u.stage) + (u.ok ? "" : "!") + ";";
  }
  // In-flight expectations without their message ids.
  std::map<std::string, int> ops;
  for (const auto& [msg_id, p] : pending_) {
    ops["t" + std::to_string(p.txn_id) + "p" + std::to_string(p.participant) + "o" +
        std::to_string(static_cast<int>(p.op))]++;
  }
  for (const auto& [k, n] : ops) {
    d += k + "x" + std::to_string(n) + ";";
  }
  for (const TxnStatus& st : finished_) {
    d += "fin" + std::to_string(st.id) + "=" + outcome_name(st.outcome) + ";";
  }
  return d;
}

std::vector<Controller::TxnStatus> Controller::transactions() const {
  std::vector<TxnStatus> all = finished_;
  for (const auto& [id, t] : txns_) {
    TxnStatus st;
    st.id = id;
    st.label = t.label;
    st.phase = t.phase;
    st.outcome = t.outcome;
    st.finished = false;
    st.execute_at = t.execute_at;
    st.execute_at_set = t.execute_at_set;
    for (const Participant& p : t.parts) st.participants.push_back(p.device);
    all.push_back(std::move(st));
  }
  std::sort(all.begin(), all.end(), [](const TxnStatus& x, const TxnStatus& y) { return x.id < y.id; });
  return all;
}

}  // namespace tsnsim
