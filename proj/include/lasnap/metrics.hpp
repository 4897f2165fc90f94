#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lasnap/trace.hpp"

namespace lasnap {

/// Raised when a metric needs a hole-free stretch of the trace.
class CoveredRequired : public std::runtime_error {
 public:
  CoveredRequired(std::uint64_t left, std::uint64_t right);
  std::uint64_t left;
  std::uint64_t right;
};

struct RoundAssignment {
  std::vector<std::uint64_t> rounds;    // by event id
  std::vector<std::uint64_t> boundary;  // boundary[r] = last event of round r
  std::uint64_t last_round() const { return rounds.empty() ? 0 : rounds.back(); }
};

/// Iterative round assignment; defined on every trace.
RoundAssignment assign_ira(const ExecutionTrace& t);
/// Same, with every event up to and including `start` in round 0.
RoundAssignment assign_ira_from(const ExecutionTrace& t, std::uint64_t start);

/// Non-timed rounds over the whole trace. Throws CoveredRequired on a hole.
RoundAssignment assign_ntr(const ExecutionTrace& t);
/// Round of event j when events up to i form round 0. Only the cuts
/// between i and j need to be covered.
std::uint64_t latency_between(const ExecutionTrace& t, std::uint64_t i, std::uint64_t j);
/// ntr(j) - ntr(i) over the whole trace.
std::int64_t naive_ntr_difference(const ExecutionTrace& t, std::uint64_t i, std::uint64_t j);

/// Longest causal chain, one-based: an event that receives nothing is round 1.
RoundAssignment assign_lcc(const ExecutionTrace& t);
/// Length in hops of the longest causal chain (highest LCC round minus one).
std::uint64_t lcc_rounds(const ExecutionTrace& t);

/// Adjacent pairs (l, l+1) that no delivered message crosses.
std::vector<std::pair<std::uint64_t, std::uint64_t>> find_holes(const ExecutionTrace& t);
bool is_covered(const ExecutionTrace& t);

struct Hop {
  std::uint64_t from = 0;  // sending event
  std::uint64_t to = 0;    // receiving event
  friend bool operator==(const Hop&, const Hop&) = default;
};

struct HopCover {
  std::size_t k = 0;
  std::vector<Hop> hops;
  bool exhaustive = false;  // false: greedy, cross-checked against the interval greedy
};

std::vector<Hop> message_hops(const ExecutionTrace& t);
/// Smallest hop set whose intervals union to [0, last event].
HopCover min_hop_cover(const ExecutionTrace& t);
/// Smallest hop set whose intervals contain [i, j].
HopCover min_hop_cover_between(const ExecutionTrace& t, std::uint64_t i, std::uint64_t j);
/// True if the union of the hop intervals contains [i, j].
bool hops_cover(std::vector<Hop> hops, std::uint64_t i, std::uint64_t j);

inline constexpr std::size_t kExhaustiveHopLimit = 20;

struct OpLatency {
  std::uint64_t op = 0;
  NodeId node = 0;
  CallKind kind = CallKind::Update;
  std::uint64_t call_event = 0;
  std::uint64_t return_event = 0;
  std::uint64_t rounds = 0;
  std::optional<std::size_t> hop_cover;
  bool fallback = false;  // a hole inside the interval; rounds come from IRA
};

/// Latency of every completed operation, from its call event to its reply.
std::vector<OpLatency> operation_latencies(const ExecutionTrace& t, bool with_hop_cover = false);

}  // namespace lasnap
