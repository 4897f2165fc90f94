#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lasnap/aso_adapter.hpp"
#include "lasnap/la_protocol.hpp"
#include "lasnap/trace.hpp"

namespace lasnap {

class SimError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct OutMsg {
  NodeId to = 0;
  std::string kind;
  std::optional<AsoVector> value;
  std::string tag;
};

struct InMsg {
  NodeId from = 0;
  std::uint64_t seq = 0;
  std::string kind;
  std::optional<AsoVector> value;
  std::string tag;
};

struct ProcessOutput {
  std::vector<OutMsg> messages;
  std::vector<ProposalRecord> proposals;
  std::vector<LearnRecord> learns;
  std::vector<ReplyRecord> replies;

  void append(ProcessOutput&& other);
};

/// A node automaton driven by the simulator. Self-sends are never emitted.
class Process {
 public:
  virtual ~Process() = default;
  virtual ProcessOutput on_call(const CallRecord& call) = 0;
  virtual ProcessOutput on_deliver(const InMsg& msg) = 0;
  virtual ProcessOutput on_tick();
  virtual bool guard_enabled() const { return false; }
  /// True while an application call is outstanding.
  virtual bool busy() const { return false; }
};

/// The snapshot client stacked on the lattice-agreement node.
class MainProcess final : public Process {
 public:
  MainProcess(NodeId me, std::size_t n, std::size_t f, const LatticeConfig& cfg,
              GuardMode mode = GuardMode::Eager);

  ProcessOutput on_call(const CallRecord& call) override;
  ProcessOutput on_deliver(const InMsg& msg) override;
  ProcessOutput on_tick() override;
  bool guard_enabled() const override { return la_guard_enabled(la_); }
  bool busy() const override { return client_.outstanding.has_value() || raw_.size() > 0; }

  const LaNodeState& la() const { return la_; }
  const AsoClientState& client() const { return client_; }

 private:
  ProcessOutput step(const LaInput& in);
  ProcessOutput absorb(LaOutput&& out);

  LaNodeState la_;
  AsoClientState client_;
  std::map<std::uint64_t, std::pair<std::uint64_t, AsoVector>> raw_;  // la_id -> (op, value)
};

/// Reliable broadcast: deliver on first receipt and send to everyone.
class BroadcastProcess final : public Process {
 public:
  BroadcastProcess(NodeId me, std::size_t n) : me_(me), n_(n) {}
  ProcessOutput on_call(const CallRecord& call) override;
  ProcessOutput on_deliver(const InMsg& msg) override;

 private:
  ProcessOutput relay();
  NodeId me_;
  std::size_t n_;
  bool delivered_ = false;
};

/// Sends "M" to a fixed list of targets at its k-th step, for hand-built traces.
class ScriptedProcess final : public Process {
 public:
  explicit ScriptedProcess(std::vector<std::vector<NodeId>> sends) : sends_(std::move(sends)) {}
  ProcessOutput on_call(const CallRecord& call) override;
  ProcessOutput on_deliver(const InMsg& msg) override;

 private:
  ProcessOutput next();
  std::vector<std::vector<NodeId>> sends_;
  std::size_t step_ = 0;
};

class Simulator {
 public:
  Simulator(TraceHeader header, std::vector<std::unique_ptr<Process>> procs);

  const ExecutionTrace& trace() const { return trace_; }
  ExecutionTrace take_trace() { return std::move(trace_); }
  std::size_t n() const { return procs_.size(); }
  std::uint64_t now() const { return trace_.events.size(); }
  bool alive(NodeId node) const { return !crashed_.contains(node); }
  const std::set<NodeId>& crashed() const { return crashed_; }
  const Process& process(NodeId node) const { return *procs_.at(node); }

  /// Channel heads whose receiver is alive, ascending by message id.
  std::vector<std::uint64_t> deliverable() const;
  bool is_deliverable(std::uint64_t id) const;
  /// Messages still in transit on any channel (including blocked ones).
  std::vector<std::uint64_t> in_flight() const;
  std::uint64_t sent_count(NodeId node, const std::string& kind) const;
  bool completed(std::uint64_t op) const { return completed_.contains(op); }

  void inject_call(const CallRecord& call);
  /// One event in which every listed node receives its call.
  void inject_calls(const std::vector<CallRecord>& calls);
  void deliver(std::uint64_t id);
  void fire_guard(NodeId node);
  /// With drop_in_flight the node's undelivered messages vanish.
  void crash(NodeId node, bool drop_in_flight);

 private:
  Event& open_event(std::string kind, std::vector<NodeId> nodes);
  void apply(Event& e, NodeId node, ProcessOutput&& out);

  ExecutionTrace trace_;
  std::vector<std::unique_ptr<Process>> procs_;
  std::map<std::pair<NodeId, NodeId>, std::deque<std::uint64_t>> channels_;
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> next_seq_;
  std::map<std::pair<NodeId, std::string>, std::uint64_t> sent_by_kind_;
  std::set<NodeId> crashed_;
  std::set<std::uint64_t> completed_;
};

struct WorkItem {
  NodeId node = 0;
  CallKind kind = CallKind::Update;
  std::size_t reg = 0;
  std::string arg;
  std::optional<AsoVector> value;
  std::optional<std::size_t> after;  // waits for this item to complete
  std::uint64_t not_before_step = 0;
};

/// Item i becomes op id i. Items of one node are issued in order.
struct Workload {
  std::vector<WorkItem> items;
  bool simultaneous_start = false;  // first item of every node in one event
};

struct CrashTrigger {
  enum class When : std::uint8_t { AtStep, AfterSends };
  NodeId node = 0;
  When when = When::AtStep;
  std::uint64_t step = 0;
  std::string kind;  // AfterSends: message kind counted
  std::uint64_t count = 0;
};

struct FaultPlan {
  std::vector<CrashTrigger> crashes;
  /// Crashed senders whose in-flight messages are still delivered.
  std::set<NodeId> deliver_from_crashed;
};

struct Action {
  enum class Kind : std::uint8_t { Call, Deliver, Tick, Crash };
  Kind kind = Kind::Deliver;
  std::size_t item = 0;     // Call
  std::uint64_t msg = 0;    // Deliver
  NodeId node = 0;          // Tick, Crash

  static Action call(std::size_t item) { return {Kind::Call, item, 0, 0}; }
  static Action deliver(std::uint64_t msg) { return {Kind::Deliver, 0, msg, 0}; }
  static Action tick(NodeId node) { return {Kind::Tick, 0, 0, node}; }
  static Action crash(NodeId node) { return {Kind::Crash, 0, 0, node}; }
};

struct Enabled {
  std::vector<std::size_t> calls;
  std::vector<std::uint64_t> deliveries;
  std::vector<NodeId> ticks;
  bool empty() const { return calls.empty() && deliveries.empty() && ticks.empty(); }
  std::size_t size() const { return calls.size() + deliveries.size() + ticks.size(); }
};

struct RunContext {
  const Workload& workload;
  const FaultPlan& faults;
  const std::vector<bool>& injected;
};

class Schedule {
 public:
  virtual ~Schedule() = default;
  virtual std::string name() const = 0;
  /// nullopt stops the run.
  virtual std::optional<Action> choose(const Simulator& sim, const RunContext& ctx,
                                       const Enabled& enabled) = 0;
};

/// Seeded uniform choice among enabled actions. A message older than the age
/// cap is delivered first, which guarantees eventual delivery.
class FairSchedule : public Schedule {
 public:
  explicit FairSchedule(std::uint64_t seed, std::uint64_t age_cap = 0);
  std::string name() const override { return "fair"; }
  std::optional<Action> choose(const Simulator& sim, const RunContext& ctx,
                               const Enabled& enabled) override;

 protected:
  std::mt19937_64 rng_;
  std::uint64_t age_cap_;
};

class ScriptedSchedule final : public Schedule {
 public:
  explicit ScriptedSchedule(std::vector<Action> script) : script_(std::move(script)) {}
  std::string name() const override { return "scripted"; }
  std::optional<Action> choose(const Simulator& sim, const RunContext& ctx,
                               const Enabled& enabled) override;

 private:
  std::vector<Action> script_;
  std::size_t pos_ = 0;
};

enum class Outcome : std::uint8_t { Completed, Deadlock, BudgetExceeded, Stopped };

const char* to_string(Outcome o);

struct RunOptions {
  std::uint64_t budget = 0;  // 0 selects 50 * n^2 * (calls + 1)
  bool drain = true;         // keep delivering after the workload completes
};

struct RunResult {
  ExecutionTrace trace;
  Outcome outcome = Outcome::Completed;
  std::string detail;
  std::vector<bool> completed;  // per work item
};

std::uint64_t default_budget(std::size_t n, std::size_t calls);

/// With honour_not_before unset, items waiting only for their start step count as enabled.
Enabled enabled_actions(const Simulator& sim, const Workload& w, const std::vector<bool>& injected,
                        bool honour_not_before = true);

/// Applies one chosen action; crash actions honour the fault plan's
/// deliver_from_crashed set.
void apply_action(Simulator& sim, const Action& a, const Workload& w, const FaultPlan& faults,
                  std::vector<bool>& injected);

CallRecord make_call(const Workload& w, std::size_t item);

RunResult run(Simulator& sim, Schedule& schedule, const FaultPlan& faults, const Workload& workload,
              const RunOptions& opts = {});

std::vector<std::unique_ptr<Process>> make_main_processes(std::size_t n, std::size_t f,
                                                          const LatticeConfig& cfg,
                                                          GuardMode mode = GuardMode::Eager);

}  // namespace lasnap
