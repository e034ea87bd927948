#include "tsnsim/netconf_messages.hpp"

namespace tsnsim {

const char* store_name(StoreKind k) {
  return k == StoreKind::Running ? "running" : "candidate";
}

std::optional<std::string> apply_changeset(DeviceConfig& config, const Changeset& changes,
                                           std::size_t port_count) {
  DeviceConfig staged = config;
  for (const ConfigEdit& edit : changes.edits) {
    if (const auto* add = std::get_if<AddFlowEntryEdit>(&edit)) {
      auto& entries = staged.flow_table.entries();
      std::size_t pos = add->position == kAppend ? entries.size() : add->position;
      if (pos > entries.size()) {
        return "add position " + std::to_string(pos) + " out of range";
      }
      entries.insert(entries.begin() + static_cast<std::ptrdiff_t>(pos), add->entry);
    } else if (const auto* rm = std::get_if<RemoveFlowEntryEdit>(&edit)) {
      auto& entries = staged.flow_table.entries();
      if (rm->position >= entries.size()) {
        return "remove position " + std::to_string(rm->position) + " out of range";
      }
      entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(rm->position));
    } else if (const auto* rg = std::get_if<ReplaceGclEdit>(&edit)) {
      if (auto err = rg->gcl.validate()) {
        return "replacement GCL for port " + std::to_string(rg->port) + ": " + *err;
      }
      staged.gcls[rg->port] = rg->gcl;
    }
  }
  if (auto err = staged.validate(port_count)) {
    return err;
  }
  config = std::move(staged);
  return std::nullopt;
}

const char* request_name(const RequestBody& body) {
  struct Visitor {
    const char* operator()(const LockReq&) const { return "Lock"; }
    const char* operator()(const UnlockReq&) const { return "Unlock"; }
    const char* operator()(const CopyConfigReq&) const { return "CopyConfig"; }
    const char* operator()(const EditConfigReq&) const { return "EditConfig"; }
    const char* operator()(const ValidateReq&) const { return "Validate"; }
    const char* operator()(const CommitPrepareReq&) const { return "CommitPrepare"; }
    const char* operator()(const CommitExecuteReq&) const { return "CommitExecute"; }
    const char* operator()(const CommitCancelReq&) const { return "CommitCancel"; }
  };
  return std::visit(Visitor{}, body);
}

const char* reply_name(const ReplyBody& body) {
  struct Visitor {
    const char* operator()(const OkRep&) const { return "Ok"; }
    const char* operator()(const ErrorRep&) const { return "Error"; }
    const char* operator()(const CommitReadyAckRep&) const { return "CommitReadyAck"; }
    const char* operator()(const CommitNackRep&) const { return "CommitNack"; }
  };
  return std::visit(Visitor{}, body);
}

const char* error_reason_name(ErrorReason r) {
  switch (r) {
    case ErrorReason::LockDenied: return "LockDenied";
    case ErrorReason::NoLock: return "NoLock";
    case ErrorReason::NotHolder: return "NotHolder";
    case ErrorReason::CandidateExists: return "CandidateExists";
    case ErrorReason::NoCandidate: return "NoCandidate";
    case ErrorReason::InvalidEdit: return "InvalidEdit";
    case ErrorReason::NothingPrepared: return "NothingPrepared";
    case ErrorReason::CopyFailed: return "CopyFailed";
    case ErrorReason::InjectedFault: return "InjectedFault";
  }
  return "?";
}

const char* nack_reason_name(NackReason r) {
  switch (r) {
    case NackReason::TimestampInPast: return "TimestampInPast";
    case NackReason::NoCandidate: return "NoCandidate";
    case NackReason::InjectedFault: return "InjectedFault";
  }
  return "?";
}

}  // namespace tsnsim
