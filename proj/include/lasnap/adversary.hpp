#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lasnap/sim.hpp"

namespace lasnap {

/// Fair choice, except that pending calls always go first.
class ContentionBurstSchedule final : public FairSchedule {
 public:
  using FairSchedule::FairSchedule;
  std::string name() const override { return "contention-burst"; }
  std::optional<Action> choose(const Simulator& sim, const RunContext& ctx,
                               const Enabled& enabled) override;
};

/// Delays the one-shot view-array protocol with f = 2h crashes, n = 2f + 1.
/// Group A = {0..h-1}, group B = {h..2h-1}, the singled-out correct node is 2h.
/// Phase i hands value x_{a_i} to all of B and the correct node, funnels the
/// remaining A values through one B node, crashes the previous funnel and then
/// delivers everything sent before the phase. After phase h it plays fair.
class GargHalfSplitSchedule final : public FairSchedule {
 public:
  GargHalfSplitSchedule(std::size_t f, std::uint64_t seed);
  std::string name() const override { return "garg-half-split"; }
  std::optional<Action> choose(const Simulator& sim, const RunContext& ctx,
                               const Enabled& enabled) override;

  std::size_t phases() const { return h_; }
  NodeId correct_witness() const { return static_cast<NodeId>(2 * h_); }

 private:
  enum class Step : std::uint8_t { Hand, Funnel, Crash, Flush, Done };

  std::optional<Action> hand(const Simulator& sim);
  std::optional<Action> funnel(const Simulator& sim);
  std::optional<Action> crash(const Simulator& sim);
  std::optional<Action> flush(const Simulator& sim);
  /// Next message on from->to, if the value x_k has not yet gone through.
  std::optional<std::uint64_t> toward(const Simulator& sim, NodeId from, NodeId to,
                                      std::size_t k) const;
  NodeId funnel_node(std::size_t phase) const { return static_cast<NodeId>(h_ + phase - 1); }

  std::size_t f_;
  std::size_t h_;
  std::size_t phase_ = 1;
  Step step_ = Step::Hand;
  std::vector<std::size_t> msg_phase_;  // phase in which each message was sent
  std::vector<AsoVector> values_;        // initial value of each node
  bool seen_start_ = false;
};

/// Holds back the updates of k faulty nodes and releases them one at a time,
/// each just after some correct node has validated the target update (and the
/// previously released one), then crashes the released node. The remaining
/// faulty nodes crash at the start. Work items 0..k-1 must be the faulty
/// updates, in release order; item k is the target.
class ActiveFaultyDelaySchedule final : public FairSchedule {
 public:
  ActiveFaultyDelaySchedule(std::vector<NodeId> active, std::size_t target_item, std::uint64_t seed);
  std::string name() const override { return "active-faulty-delay"; }
  std::optional<Action> choose(const Simulator& sim, const RunContext& ctx,
                               const Enabled& enabled) override;

 private:
  bool validated_somewhere(const Simulator& sim, const AsoVector& v) const;

  std::vector<NodeId> active_;
  std::size_t target_item_;
  std::size_t released_ = 0;
  bool releasing_ = false;
  std::optional<AsoVector> target_;
  std::vector<AsoVector> faulty_values_;
};

}  // namespace lasnap

namespace lasnap {

/// Starves a seeded set of victim nodes: their messages and guards only move
/// when nothing else is enabled. Not fair, but never blocks the run.
class StarveSchedule final : public FairSchedule {
 public:
  StarveSchedule(std::uint64_t seed, std::set<NodeId> victims)
      : FairSchedule(seed, ~std::uint64_t{0}), victims_(std::move(victims)) {}
  std::string name() const override { return "starve"; }
  std::optional<Action> choose(const Simulator& sim, const RunContext& ctx,
                               const Enabled& enabled) override;

 private:
  std::set<NodeId> victims_;
};

}  // namespace lasnap
