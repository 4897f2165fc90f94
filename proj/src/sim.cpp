#include "lasnap/sim.hpp"

#include <algorithm>
#include <functional>

namespace lasnap {

void ProcessOutput::append(ProcessOutput&& other) {
  auto move_all = [](auto& dst, auto& src) {
    dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
  };
  move_all(messages, other.messages);
  move_all(proposals, other.proposals);
  move_all(learns, other.learns);
  move_all(replies, other.replies);
}

ProcessOutput Process::on_tick() { throw SimError("process has no guarded block to fire"); }

// ---------------------------------------------------------------------------

namespace {

CallKind call_kind(AsoOpKind k) {
  switch (k) {
    case AsoOpKind::Update:
      return CallKind::Update;
    case AsoOpKind::Snapshot:
      return CallKind::Snapshot;
    case AsoOpKind::MwUpdate:
      return CallKind::MwUpdate;
  }
  return CallKind::Update;
}

}  // namespace

MainProcess::MainProcess(NodeId me, std::size_t n, std::size_t f, const LatticeConfig& cfg,
                         GuardMode mode)
    : la_(la_init(me, n, f, cfg, mode)), client_(aso_init(me, cfg)) {}

ProcessOutput MainProcess::on_call(const CallRecord& call) {
  AppPropose p;
  switch (call.kind) {
    case CallKind::Update: {
      auto [s, prop] = aso_update(client_, call.reg, call.arg, call.op);
      client_ = std::move(s);
      p = std::move(prop);
      break;
    }
    case CallKind::Snapshot: {
      auto [s, prop] = aso_snapshot(client_, call.op);
      client_ = std::move(s);
      p = std::move(prop);
      break;
    }
    case CallKind::MwUpdate: {
      auto [s, prop] = aso_update_mw(client_, call.reg, call.arg, call.op);
      client_ = std::move(s);
      p = std::move(prop);
      break;
    }
    case CallKind::Propose: {
      if (!call.value) throw SimError("propose call without a lattice value");
      if (busy()) throw AsoUsageError("node already has an operation in flight");
      p = AppPropose{client_.next_la_id++, *call.value};
      raw_[p.id] = {call.op, *call.value};
      break;
    }
  }
  ProcessOutput out;
  out.proposals.push_back(ProposalRecord{la_.me, p.id, call.op, p.value});
  out.append(step(p));
  return out;
}

ProcessOutput MainProcess::on_deliver(const InMsg& msg) {
  if (!msg.value) throw SimError("lattice agreement message without a value");
  LaMessage m{la_kind_from_string(msg.kind), *msg.value, msg.from, la_.me, msg.seq};
  return step(Deliver{std::move(m)});
}

ProcessOutput MainProcess::on_tick() {
  if (!guard_enabled()) throw SimError("no enabled guard at node " + std::to_string(la_.me));
  return step(InternalTick{});
}

ProcessOutput MainProcess::step(const LaInput& in) {
  auto [s, out] = la_step(std::move(la_), in);
  la_ = std::move(s);
  return absorb(std::move(out));
}

ProcessOutput MainProcess::absorb(LaOutput&& out) {
  ProcessOutput res;
  for (auto& m : out.messages) {
    res.messages.push_back(OutMsg{m.receiver, to_string(m.kind), std::move(m.value), {}});
  }
  for (auto& learn : out.learns) {
    LearnRecord rec{la_.me, learn.value, {}};
    for (const auto& p : learn.satisfied) rec.completes.push_back(p.id);
    res.learns.push_back(std::move(rec));

    for (const auto& p : learn.satisfied) {
      auto it = raw_.find(p.id);
      if (it == raw_.end()) continue;
      res.replies.push_back(
          ReplyRecord{it->second.first, la_.me, CallKind::Propose, {}, learn.value, it->second.second});
      raw_.erase(it);
    }

    auto progress = aso_on_learn(std::move(client_), learn);
    client_ = std::move(progress.state);
    if (progress.completion) {
      auto& c = *progress.completion;
      res.replies.push_back(ReplyRecord{c.op_id, la_.me, call_kind(c.kind), std::move(c.result),
                                        std::move(c.witness), std::move(c.marker)});
    }
    if (progress.next) {
      res.proposals.push_back(
          ProposalRecord{la_.me, progress.next->id, client_.outstanding->op_id, progress.next->value});
      res.append(step(*progress.next));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------

ProcessOutput BroadcastProcess::relay() {
  ProcessOutput out;
  delivered_ = true;
  for (NodeId j = 0; j < n_; ++j) {
    if (j != me_) out.messages.push_back(OutMsg{j, "M", std::nullopt, {}});
  }
  return out;
}

ProcessOutput BroadcastProcess::on_call(const CallRecord&) { return relay(); }

ProcessOutput BroadcastProcess::on_deliver(const InMsg&) {
  return delivered_ ? ProcessOutput{} : relay();
}

ProcessOutput ScriptedProcess::next() {
  ProcessOutput out;
  if (step_ < sends_.size()) {
    for (auto to : sends_[step_]) out.messages.push_back(OutMsg{to, "M", std::nullopt, {}});
  }
  ++step_;
  return out;
}

ProcessOutput ScriptedProcess::on_call(const CallRecord&) { return next(); }
ProcessOutput ScriptedProcess::on_deliver(const InMsg&) { return next(); }

// ---------------------------------------------------------------------------

Simulator::Simulator(TraceHeader header, std::vector<std::unique_ptr<Process>> procs)
    : procs_(std::move(procs)) {
  if (procs_.size() != header.n) throw SimError("process count does not match header n");
  if (2 * header.f >= header.n) throw SimError("fault bound requires f < n/2");
  trace_.header = std::move(header);
}

std::vector<std::uint64_t> Simulator::deliverable() const {
  std::vector<std::uint64_t> out;
  for (const auto& [ch, q] : channels_) {
    if (!q.empty() && alive(ch.second)) out.push_back(q.front());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Simulator::is_deliverable(std::uint64_t id) const {
  if (id >= trace_.messages.size()) return false;
  const auto& m = trace_.messages[id];
  if (!alive(m.to)) return false;
  auto it = channels_.find({m.from, m.to});
  return it != channels_.end() && !it->second.empty() && it->second.front() == id;
}

std::vector<std::uint64_t> Simulator::in_flight() const {
  std::vector<std::uint64_t> out;
  for (const auto& [ch, q] : channels_) out.insert(out.end(), q.begin(), q.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t Simulator::sent_count(NodeId node, const std::string& kind) const {
  auto it = sent_by_kind_.find({node, kind});
  return it == sent_by_kind_.end() ? 0 : it->second;
}

Event& Simulator::open_event(std::string kind, std::vector<NodeId> nodes) {
  Event e;
  e.id = trace_.events.size();
  e.kind = std::move(kind);
  e.nodes = std::move(nodes);
  trace_.events.push_back(std::move(e));
  return trace_.events.back();
}

void Simulator::apply(Event& e, NodeId node, ProcessOutput&& out) {
  for (auto& m : out.messages) {
    if (m.to >= n() || m.to == node) throw SimError("process emitted a message to an invalid node");
    MessageRecord rec;
    rec.id = trace_.messages.size();
    rec.from = node;
    rec.to = m.to;
    rec.seq = ++next_seq_[{node, m.to}];
    rec.kind = std::move(m.kind);
    rec.value = std::move(m.value);
    rec.tag = std::move(m.tag);
    rec.sent_at = e.id;
    ++sent_by_kind_[{node, rec.kind}];
    channels_[{node, rec.to}].push_back(rec.id);
    e.send.push_back(rec.id);
    trace_.messages.push_back(std::move(rec));
  }
  for (auto& p : out.proposals) e.proposals.push_back(std::move(p));
  for (auto& l : out.learns) e.learns.push_back(std::move(l));
  for (auto& r : out.replies) {
    completed_.insert(r.op);
    e.replies.push_back(std::move(r));
  }
}

void Simulator::inject_call(const CallRecord& call) { inject_calls({call}); }

void Simulator::inject_calls(const std::vector<CallRecord>& calls) {
  if (calls.empty()) throw SimError("no calls to inject");
  std::vector<NodeId> nodes;
  for (const auto& c : calls) {
    if (c.node >= n()) throw SimError("call at unknown node " + std::to_string(c.node));
    if (!alive(c.node)) throw SimError("call at crashed node " + std::to_string(c.node));
    if (std::find(nodes.begin(), nodes.end(), c.node) != nodes.end()) {
      throw SimError("two calls for one node in a single event");
    }
    nodes.push_back(c.node);
  }
  auto& e = open_event(calls.size() == 1 ? "call" : "start", nodes);
  for (const auto& c : calls) {
    e.calls.push_back(c);
    apply(e, c.node, procs_[c.node]->on_call(c));
  }
}

void Simulator::deliver(std::uint64_t id) {
  if (!is_deliverable(id)) {
    throw SimError("message " + std::to_string(id) + " is not deliverable");
  }
  auto& rec = trace_.messages[id];
  channels_[{rec.from, rec.to}].pop_front();
  auto& e = open_event("deliver", {rec.to});
  e.recv.push_back(id);
  rec.delivered_at = e.id;
  InMsg in{rec.from, rec.seq, rec.kind, rec.value, rec.tag};
  apply(e, rec.to, procs_[rec.to]->on_deliver(in));
}

void Simulator::fire_guard(NodeId node) {
  if (node >= n() || !alive(node) || !procs_[node]->guard_enabled()) {
    throw SimError("no enabled guard at node " + std::to_string(node));
  }
  auto& e = open_event("tick", {node});
  apply(e, node, procs_[node]->on_tick());
}

void Simulator::crash(NodeId node, bool drop_in_flight) {
  if (node >= n()) throw SimError("crash of unknown node " + std::to_string(node));
  if (!alive(node)) throw SimError("node " + std::to_string(node) + " already crashed");
  if (crashed_.size() >= trace_.header.f) throw SimError("crash would exceed the fault bound f");
  crashed_.insert(node);
  trace_.crashed_at[node] = now();
  if (drop_in_flight) {
    for (auto& [ch, q] : channels_) {
      if (ch.first == node) q.clear();
    }
  }
}

// ---------------------------------------------------------------------------

FairSchedule::FairSchedule(std::uint64_t seed, std::uint64_t age_cap)
    : rng_(seed), age_cap_(age_cap) {}

std::optional<Action> FairSchedule::choose(const Simulator& sim, const RunContext&,
                                           const Enabled& en) {
  if (en.empty()) return std::nullopt;
  const auto cap = age_cap_ ? age_cap_ : 64 * sim.n();
  if (!en.deliveries.empty()) {
    const auto oldest = en.deliveries.front();
    if (sim.now() - sim.trace().messages[oldest].sent_at > cap) return Action::deliver(oldest);
  }
  auto k = rng_() % en.size();
  if (k < en.calls.size()) return Action::call(en.calls[k]);
  k -= en.calls.size();
  if (k < en.deliveries.size()) return Action::deliver(en.deliveries[k]);
  k -= en.deliveries.size();
  return Action::tick(en.ticks[k]);
}

std::optional<Action> ScriptedSchedule::choose(const Simulator&, const RunContext&, const Enabled&) {
  if (pos_ >= script_.size()) return std::nullopt;
  return script_[pos_++];
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Completed:
      return "completed";
    case Outcome::Deadlock:
      return "deadlock";
    case Outcome::BudgetExceeded:
      return "budget-exceeded";
    case Outcome::Stopped:
      return "stopped";
  }
  return "?";
}

std::uint64_t default_budget(std::size_t n, std::size_t calls) {
  return 50 * static_cast<std::uint64_t>(n) * n * (calls + 1);
}

CallRecord make_call(const Workload& w, std::size_t item) {
  const auto& it = w.items.at(item);
  return CallRecord{item, it.node, it.kind, it.reg, it.arg, it.value};
}

Enabled enabled_actions(const Simulator& sim, const Workload& w, const std::vector<bool>& injected,
                        bool honour_not_before) {
  Enabled en;
  std::set<NodeId> seen;
  for (std::size_t i = 0; i < w.items.size(); ++i) {
    const auto& it = w.items[i];
    if (injected[i] || seen.contains(it.node)) continue;
    seen.insert(it.node);
    if (!sim.alive(it.node) || sim.process(it.node).busy()) continue;
    if (it.after && !sim.completed(*it.after)) continue;
    if (honour_not_before && sim.now() < it.not_before_step) continue;
    en.calls.push_back(i);
  }
  en.deliveries = sim.deliverable();
  for (NodeId j = 0; j < sim.n(); ++j) {
    if (sim.alive(j) && sim.process(j).guard_enabled()) en.ticks.push_back(j);
  }
  return en;
}

void apply_action(Simulator& sim, const Action& a, const Workload& w, const FaultPlan& faults,
                  std::vector<bool>& injected) {
  switch (a.kind) {
    case Action::Kind::Call: {
      if (a.item >= w.items.size()) throw SimError("unknown work item");
      if (injected[a.item]) throw SimError("work item already issued");
      sim.inject_call(make_call(w, a.item));
      injected[a.item] = true;
      break;
    }
    case Action::Kind::Deliver:
      sim.deliver(a.msg);
      break;
    case Action::Kind::Tick:
      sim.fire_guard(a.node);
      break;
    case Action::Kind::Crash:
      sim.crash(a.node, !faults.deliver_from_crashed.contains(a.node));
      break;
  }
}

RunResult run(Simulator& sim, Schedule& schedule, const FaultPlan& faults, const Workload& workload,
              const RunOptions& opts) {
  const auto& items = workload.items;
  const auto budget = opts.budget ? opts.budget : default_budget(sim.n(), items.size());
  std::vector<bool> injected(items.size(), false);
  std::vector<bool> fired(faults.crashes.size(), false);
  RunContext ctx{workload, faults, injected};

  auto fire_triggers = [&] {
    for (std::size_t k = 0; k < faults.crashes.size(); ++k) {
      const auto& c = faults.crashes[k];
      if (fired[k] || !sim.alive(c.node)) continue;
      const bool due = c.when == CrashTrigger::When::AtStep
                           ? sim.now() >= c.step
                           : sim.sent_count(c.node, c.kind) >= c.count;
      if (due) {
        sim.crash(c.node, !faults.deliver_from_crashed.contains(c.node));
        fired[k] = true;
      }
    }
  };

  std::function<bool(std::size_t)> abandoned = [&](std::size_t i) {
    if (sim.completed(i)) return false;
    if (!sim.alive(items[i].node)) return true;
    return items[i].after.has_value() && abandoned(*items[i].after);
  };
  auto workload_done = [&] {
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!sim.completed(i) && !abandoned(i)) return false;
    }
    return true;
  };

  RunResult result;
  fire_triggers();
  if (workload.simultaneous_start) {
    std::vector<CallRecord> calls;
    std::set<NodeId> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (seen.insert(items[i].node).second && sim.alive(items[i].node)) {
        calls.push_back(make_call(workload, i));
        injected[i] = true;
      }
    }
    if (!calls.empty()) sim.inject_calls(calls);
  }

  while (true) {
    fire_triggers();
    auto en = enabled_actions(sim, workload, injected);
    if (en.empty()) en = enabled_actions(sim, workload, injected, false);
    const bool done = workload_done();
    if (done && (!opts.drain || (en.deliveries.empty() && en.ticks.empty()))) {
      result.outcome = Outcome::Completed;
      break;
    }
    if (sim.now() >= budget) {
      result.outcome = Outcome::BudgetExceeded;
      result.detail = "step budget of " + std::to_string(budget) + " events exhausted";
      break;
    }
    if (en.empty()) {
      result.outcome = Outcome::Deadlock;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (!sim.completed(i) && !abandoned(i)) {
          result.detail = "no enabled action while op " + std::to_string(i) + " is pending";
          break;
        }
      }
      break;
    }
    auto a = schedule.choose(sim, ctx, en);
    if (!a) {
      result.outcome = Outcome::Stopped;
      break;
    }
    apply_action(sim, *a, workload, faults, injected);
  }

  result.completed.resize(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) result.completed[i] = sim.completed(i);
  result.trace = sim.take_trace();
  return result;
}

std::vector<std::unique_ptr<Process>> make_main_processes(std::size_t n, std::size_t f,
                                                          const LatticeConfig& cfg, GuardMode mode) {
  std::vector<std::unique_ptr<Process>> procs;
  for (NodeId i = 0; i < n; ++i) procs.push_back(std::make_unique<MainProcess>(i, n, f, cfg, mode));
  return procs;
}

}  // namespace lasnap
