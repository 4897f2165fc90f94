#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lasnap/lattice.hpp"

namespace lasnap {

class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class LaKind : std::uint8_t { Request, Propose, Accept };

const char* to_string(LaKind kind);
LaKind la_kind_from_string(std::string_view s);

struct LaMessage {
  LaKind kind = LaKind::Request;
  AsoVector value;
  NodeId sender = 0;
  NodeId receiver = 0;
  std::uint64_t seq = 0;  // per (sender, receiver), starting at 1
};

/// An application proposal that has not yet been covered by a learned value.
struct PendingProposal {
  std::uint64_t id = 0;
  AsoVector value;
};

/// Eager runs the guarded blocks to a fixpoint inside every step. Deferred
/// only runs them on InternalTick, so a scheduler can delay them.
enum class GuardMode : std::uint8_t { Eager, Deferred };

struct PendingEntry {
  AsoVector value;
  std::set<NodeId> supporters;
  bool folded = false;  // already joined into validated by quorum
};

struct LaNodeState {
  NodeId me = 0;
  std::size_t n = 1;
  std::size_t f = 0;
  GuardMode mode = GuardMode::Eager;
  AsoVector bottom;

  AsoVector mpool;
  AsoVector proposing;
  AsoVector validated;
  AsoVector learned;
  // Keyed by canonical encoding.
  std::map<std::string, PendingEntry> pending;
  AsoVector pending_join;
  std::vector<std::string> quorum_ready;
  std::deque<PendingProposal> pending_ops;

  std::vector<std::uint64_t> next_seq_out;
  std::vector<std::uint64_t> next_seq_in;

  std::size_t quorum() const { return n - f; }
};

struct AppPropose {
  std::uint64_t id = 0;
  AsoVector value;
};
struct Deliver {
  LaMessage msg;
};
struct InternalTick {};

using LaInput = std::variant<AppPropose, Deliver, InternalTick>;

struct LearnReport {
  AsoVector value;
  std::vector<PendingProposal> satisfied;
};

struct LaOutput {
  std::vector<LaMessage> messages;
  std::vector<LearnReport> learns;
};

LaNodeState la_init(NodeId me, std::size_t n, std::size_t f, const LatticeConfig& lattice,
                    GuardMode mode = GuardMode::Eager);

/// Applies one input and then the enabled guarded blocks (see GuardMode).
std::pair<LaNodeState, LaOutput> la_step(LaNodeState s, const LaInput& in);

inline const AsoVector& la_learned(const LaNodeState& s) { return s.learned; }

/// True if some guarded block (start proposal, quorum, learn) would fire.
bool la_guard_enabled(const LaNodeState& s);

}  // namespace lasnap
