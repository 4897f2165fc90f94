#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lasnap/lattice.hpp"

namespace lasnap {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CallKind : std::uint8_t { Update, Snapshot, MwUpdate, Propose };

const char* to_string(CallKind kind);
CallKind call_kind_from_string(std::string_view s);

struct CallRecord {
  std::uint64_t op = 0;
  NodeId node = 0;
  CallKind kind = CallKind::Update;
  std::size_t reg = 0;
  std::string arg;
  std::optional<AsoVector> value;  // Propose only

  friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

struct ReplyRecord {
  std::uint64_t op = 0;
  NodeId node = 0;
  CallKind kind = CallKind::Update;
  std::vector<std::string> result;
  std::optional<AsoVector> witness;
  std::optional<AsoVector> marker;

  friend bool operator==(const ReplyRecord&, const ReplyRecord&) = default;
};

/// A value handed to the agreement layer. `op` links it to the application call.
struct ProposalRecord {
  NodeId node = 0;
  std::uint64_t la_id = 0;
  std::optional<std::uint64_t> op;
  AsoVector value;

  friend bool operator==(const ProposalRecord&, const ProposalRecord&) = default;
};

struct LearnRecord {
  NodeId node = 0;
  AsoVector value;
  std::vector<std::uint64_t> completes;  // la_ids satisfied by this learn

  friend bool operator==(const LearnRecord&, const LearnRecord&) = default;
};

struct MessageRecord {
  std::uint64_t id = 0;
  NodeId from = 0;
  NodeId to = 0;
  std::uint64_t seq = 0;
  std::string kind;
  std::optional<AsoVector> value;
  std::string tag;
  std::uint64_t sent_at = 0;
  std::optional<std::uint64_t> delivered_at;

  friend bool operator==(const MessageRecord&, const MessageRecord&) = default;
};

std::string message_digest(const MessageRecord& m);

struct Event {
  std::uint64_t id = 0;
  std::string kind;
  std::vector<NodeId> nodes;
  std::vector<std::uint64_t> recv;
  std::vector<std::uint64_t> send;
  std::vector<CallRecord> calls;
  std::vector<ReplyRecord> replies;
  std::vector<ProposalRecord> proposals;
  std::vector<LearnRecord> learns;

  friend bool operator==(const Event&, const Event&) = default;
};

struct TraceHeader {
  int version = 1;
  std::size_t n = 1;
  std::size_t f = 0;
  std::uint64_t seed = 0;
  std::string protocol;
  std::string label;
  std::size_t m = 1;
  std::string initial;

  LatticeConfig lattice() const { return LatticeConfig{m, n, initial}; }
  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

/// Message ids are dense and assigned in send order; messages[i].id == i.
struct ExecutionTrace {
  TraceHeader header;
  std::vector<Event> events;
  std::vector<MessageRecord> messages;
  std::map<NodeId, std::uint64_t> crashed_at;  // first event id after the crash

  friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

/// Checks the execution-model invariants: sequential event ids, receptions
/// from the prior buffer, single delivery, FIFO per channel, no steps by
/// crashed nodes. Throws TraceError.
void validate_trace(const ExecutionTrace& t);

void export_trace(const ExecutionTrace& t, std::ostream& out);
std::string export_trace(const ExecutionTrace& t);
ExecutionTrace import_trace(std::istream& in);
ExecutionTrace import_trace_string(const std::string& text);
ExecutionTrace import_trace_file(const std::string& path);

/// Sender event of every message received by `e`, ascending and deduplicated.
std::vector<std::uint64_t> source_events(const ExecutionTrace& t, const Event& e);

}  // namespace lasnap
