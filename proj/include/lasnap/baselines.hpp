#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "lasnap/sim.hpp"

namespace lasnap {

// One-shot proposer/acceptor lattice agreement. Every node plays both roles.

struct FaleiroState {
  NodeId me = 0;
  std::size_t n = 1;
  AsoVector proposed;
  AsoVector accepted;
  bool started = false;
  bool active = false;
  std::uint64_t number = 0;  // proposal round, tags replies
  std::set<NodeId> acks;
  std::map<NodeId, AsoVector> nacks;
  std::optional<AsoVector> learned;
  std::uint64_t reproposals = 0;

  std::size_t majority() const { return n / 2 + 1; }
};

struct FaleiroStart {
  AsoVector value;
};
struct FaleiroDeliver {
  InMsg msg;
};
using FaleiroInput = std::variant<FaleiroStart, FaleiroDeliver>;

struct BaselineOutput {
  std::vector<OutMsg> messages;
  std::optional<AsoVector> learned;  // set on the step that learns
};

FaleiroState faleiro_init(NodeId me, std::size_t n, const LatticeConfig& cfg);
std::pair<FaleiroState, BaselineOutput> faleiro_step(FaleiroState s, const FaleiroInput& in);

// One-shot view-array lattice agreement with relaying and equivalence quorums.

struct GargState {
  NodeId me = 0;
  std::size_t n = 1;
  std::size_t f = 0;
  std::vector<AsoVector> view;  // join of the values received from each node
  bool started = false;
  std::optional<AsoVector> learned;
};

struct GargStart {
  AsoVector value;
};
struct GargDeliver {
  InMsg msg;
};
using GargInput = std::variant<GargStart, GargDeliver>;

GargState garg_init(NodeId me, std::size_t n, std::size_t f, const LatticeConfig& cfg);
std::pair<GargState, BaselineOutput> garg_step(GargState s, const GargInput& in);
/// A set of at least n-f nodes, including me, whose view entries equal mine.
bool garg_equivalence_quorum(const GargState& s);

class FaleiroProcess final : public Process {
 public:
  FaleiroProcess(NodeId me, std::size_t n, const LatticeConfig& cfg) : s_(faleiro_init(me, n, cfg)) {}
  ProcessOutput on_call(const CallRecord& call) override;
  ProcessOutput on_deliver(const InMsg& msg) override;
  const FaleiroState& state() const { return s_; }

 private:
  ProcessOutput wrap(BaselineOutput&& out);
  FaleiroState s_;
  std::uint64_t op_ = 0;
};

class GargProcess final : public Process {
 public:
  GargProcess(NodeId me, std::size_t n, std::size_t f, const LatticeConfig& cfg)
      : s_(garg_init(me, n, f, cfg)) {}
  ProcessOutput on_call(const CallRecord& call) override;
  ProcessOutput on_deliver(const InMsg& msg) override;
  const GargState& state() const { return s_; }

 private:
  ProcessOutput wrap(BaselineOutput&& out);
  GargState s_;
  std::uint64_t op_ = 0;
};

}  // namespace lasnap
