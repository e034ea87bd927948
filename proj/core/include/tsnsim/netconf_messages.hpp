#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tsnsim/device_config.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

enum class StoreKind : std::uint8_t { Running, Candidate };

const char* store_name(StoreKind k);

// ---- primitive configuration edits ----

// position == npos appends.
inline constexpr std::size_t kAppend = static_cast<std::size_t>(-1);

struct AddFlowEntryEdit {
  std::size_t position = kAppend;
  FlowEntry entry;
};
struct RemoveFlowEntryEdit {
  std::size_t position = 0;
};
struct ReplaceGclEdit {
  PortId port = 0;
  GateControlList gcl;
};
using ConfigEdit = std::variant<AddFlowEntryEdit, RemoveFlowEntryEdit, ReplaceGclEdit>;

struct Changeset {
  std::vector<ConfigEdit> edits;
  bool empty() const { return edits.empty(); }
};

// Applies the edits in order to a copy of `config`; returns a diagnostic on
// the first invalid edit and leaves `config` untouched in that case.
std::optional<std::string> apply_changeset(DeviceConfig& config, const Changeset& changes,
                                           std::size_t port_count);

// ---- request / reply bodies ----

struct LockReq { StoreKind store = StoreKind::Running; };
struct UnlockReq { StoreKind store = StoreKind::Running; };
struct CopyConfigReq {};
struct EditConfigReq {
  StoreKind store = StoreKind::Candidate;
  Changeset changes;
};
struct ValidateReq { StoreKind store = StoreKind::Candidate; };
struct CommitPrepareReq { SimTime execute_at; };  // device-local timestamp
struct CommitExecuteReq {};
struct CommitCancelReq {};

using RequestBody = std::variant<LockReq, UnlockReq, CopyConfigReq, EditConfigReq, ValidateReq,
                                 CommitPrepareReq, CommitExecuteReq, CommitCancelReq>;

enum class ErrorReason : std::uint8_t {
  LockDenied,
  NoLock,
  NotHolder,
  CandidateExists,
  NoCandidate,
  InvalidEdit,
  NothingPrepared,
  CopyFailed,
  InjectedFault,
};

enum class NackReason : std::uint8_t {
  TimestampInPast,
  NoCandidate,
  InjectedFault,
};

struct OkRep {};
struct ErrorRep { ErrorReason reason = ErrorReason::InjectedFault; };
struct CommitReadyAckRep {};
struct CommitNackRep { NackReason reason = NackReason::InjectedFault; };

using ReplyBody = std::variant<OkRep, ErrorRep, CommitReadyAckRep, CommitNackRep>;

// Every request receives exactly one reply carrying the same msg_id.
struct Request {
  std::uint64_t msg_id = 0;
  std::uint32_t session = 0;
  RequestBody body;
};

struct Reply {
  std::uint64_t msg_id = 0;
  std::uint32_t session = 0;
  ReplyBody body;
};

const char* request_name(const RequestBody& body);
const char* reply_name(const ReplyBody& body);
const char* error_reason_name(ErrorReason r);
const char* nack_reason_name(NackReason r);

inline bool is_ok(const ReplyBody& b) { return std::holds_alternative<OkRep>(b); }
inline bool is_ready_ack(const ReplyBody& b) { return std::holds_alternative<CommitReadyAckRep>(b); }

}  // namespace tsnsim
