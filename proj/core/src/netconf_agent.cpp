#include "tsnsim/netconf_agent.hpp"

namespace tsnsim {

ReplyBody NetconfAgent::do_lock(std::uint32_t session, StoreKind store) {
  if (store == StoreKind::Running) {
    if (consume_fault(FaultPoint::DenyLock)) return ErrorRep{ErrorReason::LockDenied};
    if (held_for_commit_) return ErrorRep{ErrorReason::LockDenied};
    if (!running_lock_ || *running_lock_ == session) {
      running_lock_ = session;  // re-lock by the owner is idempotent
      return OkRep{};
    }
    return ErrorRep{ErrorReason::LockDenied};
  }
  if (!candidate_) return ErrorRep{ErrorReason::NoCandidate};
  if (!candidate_lock_ || *candidate_lock_ == session) {
    candidate_lock_ = session;
    return OkRep{};
  }
  return ErrorRep{ErrorReason::LockDenied};
}

ReplyBody NetconfAgent::do_unlock(std::uint32_t session, StoreKind store) {
  if (store == StoreKind::Running) {
    if (running_lock_ && *running_lock_ != session) return ErrorRep{ErrorReason::NotHolder};
    running_lock_.reset();
    if (execute_released_ && pending_execute_at_) {
      // A released commit still owns the store until it applies.
      held_for_commit_ = true;
    }
    return OkRep{};
  }
  if (!candidate_) return OkRep{};  // nothing to unlock
  if (candidate_lock_ && *candidate_lock_ != session) return ErrorRep{ErrorReason::NotHolder};
  candidate_lock_.reset();
  if (!execute_released_) {
    // Unconfirmed changes are deleted together with the candidate.
    candidate_.reset();
    pending_execute_at_.reset();
  }
  return OkRep{};
}

NetconfAgent::Result NetconfAgent::handle(const Request& req, SimTime local_now) {
  Result result;
  if (consume_fault(FaultPoint::SwallowRequest)) {
    return result;  // no reply; peers must rely on their timeout
  }

  struct Visitor {
    NetconfAgent& a;
    const Request& req;
    SimTime now;
    Result& result;

    ReplyBody operator()(const LockReq& m) { return a.do_lock(req.session, m.store); }
    ReplyBody operator()(const UnlockReq& m) { return a.do_unlock(req.session, m.store); }

    ReplyBody operator()(const CopyConfigReq&) {
      if (!a.running_lock_ || *a.running_lock_ != req.session) return ErrorRep{ErrorReason::NoLock};
      if (a.candidate_) return ErrorRep{ErrorReason::CandidateExists};
      if (a.consume_fault(FaultPoint::FailCopy)) return ErrorRep{ErrorReason::CopyFailed};
      a.candidate_ = a.running_;
      a.candidate_lock_ = req.session;  // locked immediately after instantiation
      return OkRep{};
    }

    ReplyBody operator()(const EditConfigReq& m) {
      if (a.consume_fault(FaultPoint::RejectEdit)) return ErrorRep{ErrorReason::InvalidEdit};
      if (m.store == StoreKind::Candidate) {
        if (!a.candidate_) return ErrorRep{ErrorReason::NoCandidate};
        if (!a.candidate_lock_ || *a.candidate_lock_ != req.session) return ErrorRep{ErrorReason::NoLock};
        if (apply_changeset(*a.candidate_, m.changes, a.port_count_)) {
          return ErrorRep{ErrorReason::InvalidEdit};
        }
        return OkRep{};
      }
      if (!a.running_lock_ || *a.running_lock_ != req.session) return ErrorRep{ErrorReason::NoLock};
      if (apply_changeset(a.running_, m.changes, a.port_count_)) {
        return ErrorRep{ErrorReason::InvalidEdit};
      }
      result.running_changed = !m.changes.empty();
      return OkRep{};
    }

    ReplyBody operator()(const ValidateReq& m) {
      if (m.store == StoreKind::Candidate) {
        if (!a.candidate_) return ErrorRep{ErrorReason::NoCandidate};
        if (a.candidate_->validate(a.port_count_)) return ErrorRep{ErrorReason::InvalidEdit};
        return OkRep{};
      }
      if (a.running_.validate(a.port_count_)) return ErrorRep{ErrorReason::InvalidEdit};
      return OkRep{};
    }

    ReplyBody operator()(const CommitPrepareReq& m) {
      if (a.consume_fault(FaultPoint::NackPrepare)) return CommitNackRep{NackReason::InjectedFault};
      if (!a.candidate_) return CommitNackRep{NackReason::NoCandidate};
      if (m.execute_at <= now + a.apply_margin_) return CommitNackRep{NackReason::TimestampInPast};
      a.pending_execute_at_ = m.execute_at;
      return CommitReadyAckRep{};
    }

    ReplyBody operator()(const CommitExecuteReq&) {
      if (!a.pending_execute_at_) return ErrorRep{ErrorReason::NothingPrepared};
      a.execute_released_ = true;
      result.schedule_apply_local = a.pending_execute_at_;
      result.execute_margin_ns = (a.pending_execute_at_->count() - now.count());
      return OkRep{};
    }

    ReplyBody operator()(const CommitCancelReq&) {
      if (a.pending_execute_at_ && !a.execute_released_) {
        a.pending_execute_at_.reset();
        a.candidate_.reset();
        a.candidate_lock_.reset();
      }
      return OkRep{};
    }
  };

  ReplyBody body = std::visit(Visitor{*this, req, local_now, result}, req.body);
  result.reply = make(req, std::move(body));
  return result;
}

std::string NetconfAgent::state_digest() const {
  std::string d = "run{" + running_.canonical_string() + "}";
  d += " cand{" + (candidate_ ? candidate_->canonical_string() : std::string("-")) + "}";
  d += " rl=" + (running_lock_ ? std::to_string(*running_lock_) : std::string("-"));
  d += " cl=" + (candidate_lock_ ? std::to_string(*candidate_lock_) : std::string("-"));
  d += " pend=" + (pending_execute_at_ ? std::to_string(pending_execute_at_->count()) : std::string("-"));
  d += execute_released_ ? " rel" : "";
  d += held_for_commit_ ? " held" : "";
  return d;
}

bool NetconfAgent::fire_apply() {
  if (!pending_execute_at_ || !execute_released_ || !candidate_) {
    return false;
  }
  running_ = std::move(*candidate_);
  candidate_.reset();
  candidate_lock_.reset();
  pending_execute_at_.reset();
  execute_released_ = false;
  held_for_commit_ = false;
  return true;
}

}  // namespace tsnsim
