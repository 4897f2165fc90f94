#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lasnap/trace.hpp"

namespace lasnap {

struct Verdict {
  std::string property;
  bool pass = true;
  std::string detail;
  std::vector<std::uint64_t> events;  // counterexample event ids
};

struct LaVerdicts {
  Verdict validity{"validity", true, {}, {}};
  Verdict stability{"stability", true, {}, {}};
  Verdict consistency{"consistency", true, {}, {}};
  Verdict liveness{"liveness", true, {}, {}};

  /// Liveness only counts when the schedule was fair.
  bool all(bool fair = true) const {
    return validity.pass && stability.pass && consistency.pass && (!fair || liveness.pass);
  }
};

/// Checks the four lattice-agreement properties on the proposals and learns
/// recorded in a trace. Liveness is evaluated only when `fair` is set.
LaVerdicts check_la_properties(const ExecutionTrace& t, bool fair = true);

struct OpRecord {
  std::uint64_t op = 0;
  NodeId node = 0;
  CallKind kind = CallKind::Update;
  std::size_t reg = 0;
  std::string arg;
  std::vector<std::string> result;
  std::uint64_t call_event = 0;
  std::optional<std::uint64_t> return_event;
  std::optional<AsoVector> marker;   // update vector (updates) or snapshot vector
  std::optional<AsoVector> witness;  // learned value returned to the op

  bool complete() const { return return_event.has_value(); }
  bool is_update() const { return kind == CallKind::Update || kind == CallKind::MwUpdate; }
};

using History = std::vector<OpRecord>;

/// Snapshot-object operations of a trace, ordered by call event.
History extract_history(const ExecutionTrace& t);

struct Linearization {
  std::vector<OpRecord> order;
  std::vector<std::uint64_t> excluded;  // complete but unsuccessful updates
};

struct LinearizationResult {
  bool ok = false;
  Linearization lin;
  std::string failure;
};

/// Orders complete snapshots by the learned values they returned and
/// successful updates (complete or not) by the first learned value containing
/// them, then verifies the sequential semantics and real-time order.
LinearizationResult linearize_by_learned_order(const History& h, const ExecutionTrace& t);

/// Sequential replay of an ordering; empty string when legal.
std::string check_legal(const std::vector<OpRecord>& order, const LatticeConfig& cfg);
/// First real-time inversion in an ordering; empty string when none.
std::string check_real_time(const std::vector<OpRecord>& order);

inline constexpr std::size_t kBruteForceCompleteLimit = 8;
inline constexpr std::size_t kBruteForceIncompleteLimit = 4;

/// Exhaustive search for a legal ordering that respects real time. Incomplete
/// snapshots are ignored; incomplete updates may or may not take effect.
/// Throws std::length_error above the size caps.
bool brute_force_linearizable(const History& h, const LatticeConfig& cfg);

}  // namespace lasnap
