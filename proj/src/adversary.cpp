#include "lasnap/adversary.hpp"

#include <algorithm>

namespace lasnap {

std::optional<Action> ContentionBurstSchedule::choose(const Simulator& sim, const RunContext& ctx,
                                                      const Enabled& en) {
  if (!en.calls.empty()) return Action::call(en.calls[rng_() % en.calls.size()]);
  return FairSchedule::choose(sim, ctx, en);
}

// ---------------------------------------------------------------------------

GargHalfSplitSchedule::GargHalfSplitSchedule(std::size_t f, std::uint64_t seed)
    : FairSchedule(seed), f_(f), h_(f / 2) {
  if (f < 2 || f % 2 != 0) throw std::invalid_argument("half-split needs an even f >= 2");
}

std::optional<std::uint64_t> GargHalfSplitSchedule::toward(const Simulator& sim, NodeId from,
                                                           NodeId to, std::size_t k) const {
  if (!sim.alive(to)) return std::nullopt;
  const auto& msgs = sim.trace().messages;
  std::optional<std::uint64_t> carrier;
  for (const auto& m : msgs) {
    if (m.from != from || m.to != to || !m.value || !(*m.value == values_[k])) continue;
    if (m.delivered_at) return std::nullopt;
    carrier = m.id;
    break;
  }
  if (!carrier) return std::nullopt;
  for (auto id : sim.deliverable()) {
    if (msgs[id].from == from && msgs[id].to == to) return id;
  }
  return std::nullopt;
}

std::optional<Action> GargHalfSplitSchedule::hand(const Simulator& sim) {
  const NodeId src = phase_ == 1 ? 0 : funnel_node(phase_ - 1);
  std::vector<NodeId> targets;
  for (std::size_t b = h_; b < 2 * h_; ++b) targets.push_back(static_cast<NodeId>(b));
  targets.push_back(correct_witness());
  for (auto t : targets) {
    if (t == src) continue;
    if (auto id = toward(sim, src, t, phase_ - 1)) return Action::deliver(*id);
  }
  return std::nullopt;
}

std::optional<Action> GargHalfSplitSchedule::funnel(const Simulator& sim) {
  if (phase_ >= h_) return std::nullopt;
  const NodeId to = funnel_node(phase_);
  for (std::size_t k = phase_; k < h_; ++k) {
    const NodeId src = phase_ == 1 ? static_cast<NodeId>(k) : funnel_node(phase_ - 1);
    if (auto id = toward(sim, src, to, k)) return Action::deliver(*id);
  }
  return std::nullopt;
}

std::optional<Action> GargHalfSplitSchedule::crash(const Simulator& sim) {
  if (phase_ == 1) {
    for (NodeId a = 0; a < h_; ++a) {
      if (sim.alive(a)) return Action::crash(a);
    }
    return std::nullopt;
  }
  const auto prev = funnel_node(phase_ - 1);
  if (sim.alive(prev)) return Action::crash(prev);
  return std::nullopt;
}

std::optional<Action> GargHalfSplitSchedule::flush(const Simulator& sim) {
  const auto& msgs = sim.trace().messages;
  std::optional<std::uint64_t> best;
  for (auto id : sim.deliverable()) {
    if (msg_phase_[id] >= phase_) continue;
    if (msgs[id].from == correct_witness()) return Action::deliver(id);
    if (!best) best = id;
  }
  if (best) return Action::deliver(*best);
  return std::nullopt;
}

std::optional<Action> GargHalfSplitSchedule::choose(const Simulator& sim, const RunContext& ctx,
                                                    const Enabled& en) {
  if (!seen_start_) {
    values_.assign(sim.n(), AsoVector{});
    for (const auto& it : ctx.workload.items) {
      if (it.value && it.node < sim.n()) values_[it.node] = *it.value;
    }
  }
  const auto tag = seen_start_ ? phase_ : 0;
  seen_start_ = true;
  msg_phase_.resize(sim.trace().messages.size(), tag);

  while (step_ != Step::Done) {
    std::optional<Action> a;
    switch (step_) {
      case Step::Hand:
        if ((a = hand(sim))) return a;
        step_ = Step::Funnel;
        break;
      case Step::Funnel:
        if ((a = funnel(sim))) return a;
        step_ = Step::Crash;
        break;
      case Step::Crash:
        if ((a = crash(sim))) return a;
        step_ = Step::Flush;
        break;
      case Step::Flush:
        if ((a = flush(sim))) return a;
        step_ = ++phase_ > h_ ? Step::Done : Step::Hand;
        break;
      case Step::Done:
        break;
    }
  }
  return FairSchedule::choose(sim, ctx, en);
}

// ---------------------------------------------------------------------------

ActiveFaultyDelaySchedule::ActiveFaultyDelaySchedule(std::vector<NodeId> active,
                                                     std::size_t target_item, std::uint64_t seed)
    : FairSchedule(seed), active_(std::move(active)), target_item_(target_item) {}

bool ActiveFaultyDelaySchedule::validated_somewhere(const Simulator& sim, const AsoVector& v) const {
  for (NodeId j = 0; j < sim.n(); ++j) {
    if (!sim.alive(j) || std::find(active_.begin(), active_.end(), j) != active_.end()) continue;
    const auto* p = dynamic_cast<const MainProcess*>(&sim.process(j));
    if (p && leq(v, p->la().pending_join)) return true;
  }
  return false;
}

std::optional<Action> ActiveFaultyDelaySchedule::choose(const Simulator& sim, const RunContext& ctx,
                                                        const Enabled& en) {
  if (!target_) {
    const auto cfg = sim.trace().header.lattice();
    auto update_of = [&](std::size_t item) {
      const auto& it = ctx.workload.items.at(item);
      return make_update_vector(cfg, it.reg, 1, it.arg);
    };
    for (std::size_t j = 0; j < active_.size(); ++j) faulty_values_.push_back(update_of(j));
    target_ = update_of(target_item_);
  }
  if (!en.calls.empty()) return Action::call(*std::min_element(en.calls.begin(), en.calls.end()));

  const auto& msgs = sim.trace().messages;
  auto is_active = [&](NodeId j) {
    return std::find(active_.begin(), active_.end(), j) != active_.end();
  };

  if (!releasing_ && released_ < active_.size() && ctx.injected[target_item_] &&
      validated_somewhere(sim, *target_) &&
      (released_ == 0 || validated_somewhere(sim, faulty_values_[released_ - 1]))) {
    releasing_ = true;
  }

  Enabled held_back = en;
  held_back.deliveries.clear();
  for (auto id : en.deliveries) {
    const auto from = msgs[id].from;
    const auto pos = std::find(active_.begin(), active_.end(), from);
    if (pos == active_.end() || static_cast<std::size_t>(pos - active_.begin()) < released_) {
      held_back.deliveries.push_back(id);
    }
  }
  if (held_back.empty() && released_ < active_.size()) releasing_ = true;

  if (releasing_) {
    const auto node = active_[released_];
    for (auto id : en.deliveries) {
      if (msgs[id].from == node && !is_active(msgs[id].to)) return Action::deliver(id);
    }
    releasing_ = false;
    ++released_;
    return Action::crash(node);
  }
  return FairSchedule::choose(sim, ctx, held_back);
}

}  // namespace lasnap

namespace lasnap {

std::optional<Action> StarveSchedule::choose(const Simulator& sim, const RunContext& ctx,
                                             const Enabled& en) {
  const auto& msgs = sim.trace().messages;
  Enabled preferred;
  preferred.calls = en.calls;
  for (auto id : en.deliveries) {
    if (!victims_.contains(msgs[id].from) && !victims_.contains(msgs[id].to)) {
      preferred.deliveries.push_back(id);
    }
  }
  for (auto node : en.ticks) {
    if (!victims_.contains(node)) preferred.ticks.push_back(node);
  }
  return FairSchedule::choose(sim, ctx, preferred.empty() ? en : preferred);
}

}  // namespace lasnap
