#include <gtest/gtest.h>

#include <sstream>

#include "lasnap/metrics.hpp"
#include "lasnap/sim.hpp"

using namespace lasnap;

namespace {

TraceHeader header(std::size_t n, std::size_t f, std::uint64_t seed, std::string protocol = "main") {
  return TraceHeader{1, n, f, seed, std::move(protocol), "test", n, ""};
}

Workload one_update() {
  Workload w;
  w.items.push_back(WorkItem{0, CallKind::Update, 0, "a", {}, {}, 0});
  return w;
}

RunResult run_main(std::size_t n, std::uint64_t seed, const Workload& w, const FaultPlan& faults = {}) {
  const std::size_t f = (n - 1) / 2;
  Simulator sim(header(n, f, seed), make_main_processes(n, f, LatticeConfig::square(n)));
  FairSchedule sched(seed);
  return run(sim, sched, faults, w);
}

Simulator three_hop_script() {
  std::vector<std::unique_ptr<Process>> procs;
  procs.push_back(std::make_unique<ScriptedProcess>(std::vector<std::vector<NodeId>>{{1, 2}}));
  procs.push_back(std::make_unique<ScriptedProcess>(std::vector<std::vector<NodeId>>{{3}}));
  procs.push_back(std::make_unique<ScriptedProcess>(std::vector<std::vector<NodeId>>{}));
  procs.push_back(std::make_unique<ScriptedProcess>(std::vector<std::vector<NodeId>>{}));
  Simulator sim(header(4, 0, 0, "scripted"), std::move(procs));
  sim.inject_call(CallRecord{0, 0, CallKind::Propose, 0, {}, {}});
  sim.deliver(0);
  sim.deliver(1);
  sim.deliver(2);
  return sim;
}

}  // namespace

TEST(Run, DeterministicTraceBytes) {
  auto a = run_main(3, 7, one_update());
  auto b = run_main(3, 7, one_update());
  ASSERT_EQ(a.outcome, Outcome::Completed);
  EXPECT_TRUE(a.completed[0]);
  EXPECT_EQ(export_trace(a.trace), export_trace(b.trace));
  auto c = run_main(3, 8, one_update());
  EXPECT_NO_THROW(validate_trace(c.trace));
}

TEST(Run, CrashBeforeSendStillCompletes) {
  Workload w;
  w.items.push_back(WorkItem{0, CallKind::Update, 0, "a", {}, {}, 0});
  w.items.push_back(WorkItem{1, CallKind::Snapshot, 0, {}, {}, {}, 0});
  FaultPlan faults;
  faults.crashes.push_back(CrashTrigger{2, CrashTrigger::When::AtStep, 0, {}, 0});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto r = run_main(3, seed, w, faults);
    ASSERT_EQ(r.outcome, Outcome::Completed) << r.detail;
    EXPECT_TRUE(r.completed[0] && r.completed[1]);
    EXPECT_EQ(r.trace.crashed_at.count(2), 1u);
    for (const auto& m : r.trace.messages) EXPECT_NE(m.from, 2u);
  }
}

TEST(Run, ThreeHopScript) {
  auto sim = three_hop_script();
  const auto& t = sim.trace();
  ASSERT_EQ(t.events.size(), 4u);
  ASSERT_EQ(t.messages.size(), 3u);
  EXPECT_EQ(assign_ntr(t).rounds, (std::vector<std::uint64_t>{0, 1, 1, 2}));
  EXPECT_EQ(min_hop_cover(t).k, 2u);
}

TEST(Simulator, ActionErrors) {
  Simulator sim(header(3, 1, 0), make_main_processes(3, 1, LatticeConfig::square(3)));
  EXPECT_THROW(sim.deliver(0), SimError);
  EXPECT_THROW(sim.fire_guard(0), SimError);
  sim.inject_call(CallRecord{0, 0, CallKind::Update, 0, "a", {}});
  ASSERT_FALSE(sim.deliverable().empty());
  sim.crash(1, false);
  for (auto id : sim.in_flight()) {
    if (sim.trace().messages[id].to == 1) {
      EXPECT_THROW(sim.deliver(id), SimError);
    }
  }
  EXPECT_THROW(sim.crash(1, false), SimError);
  EXPECT_THROW(sim.crash(2, false), SimError);
  EXPECT_THROW(sim.inject_call(CallRecord{1, 1, CallKind::Snapshot, 0, {}, {}}), SimError);
  EXPECT_THROW(sim.inject_call(CallRecord{1, 5, CallKind::Snapshot, 0, {}, {}}), SimError);
  EXPECT_THROW(Simulator(header(2, 1, 0), make_main_processes(2, 0, LatticeConfig::square(2))), SimError);
}

TEST(Simulator, CrashDropsInFlight) {
  Simulator sim(header(3, 1, 0), make_main_processes(3, 1, LatticeConfig::square(3)));
  sim.inject_call(CallRecord{0, 0, CallKind::Update, 0, "a", {}});
  ASSERT_FALSE(sim.in_flight().empty());
  sim.crash(0, true);
  EXPECT_TRUE(sim.in_flight().empty());
}

TEST(Run, ScriptedScheduleDeadlockIsAnOutcome) {
  Simulator sim(header(3, 1, 0), make_main_processes(3, 1, LatticeConfig::square(3)));
  ScriptedSchedule sched({Action::call(0)});
  auto r = run(sim, sched, {}, one_update());
  EXPECT_NE(r.outcome, Outcome::Completed);
  EXPECT_FALSE(r.completed[0]);
}

TEST(TraceIo, RoundTrip) {
  Workload w = one_update();
  w.items.push_back(WorkItem{1, CallKind::MwUpdate, 2, "q", {}, {}, 0});
  w.items.push_back(WorkItem{2, CallKind::Snapshot, 0, {}, {}, 0, 0});
  auto r = run_main(3, 11, w);
  const auto text = export_trace(r.trace);
  const auto back = import_trace_string(text);
  EXPECT_EQ(back, r.trace);
  EXPECT_EQ(export_trace(back), text);

  auto fig = three_hop_script().take_trace();
  EXPECT_EQ(import_trace_string(export_trace(fig)), fig);
}

TEST(TraceIo, ImportErrors) {
  const std::string head = R"({"type":"header","version":1,"n":2,"f":0})";
  EXPECT_THROW(import_trace_string(""), TraceError);
  EXPECT_THROW(import_trace_string("{not json"), TraceError);
  EXPECT_THROW(import_trace_string(head + "\n" + R"({"type":"bogus"})"), TraceError);
  // Second message on 0->1 arrives before the first.
  const std::string swapped = head + "\n" +
      R"({"type":"event","id":0,"kind":"local","nodes":[0],"recv":[],"send":[{"id":0,"from":0,"to":1,"seq":1,"kind":"M"},{"id":1,"from":0,"to":1,"seq":2,"kind":"M"}]})" "\n"
      R"({"type":"event","id":1,"kind":"deliver","nodes":[1],"recv":[1],"send":[]})" "\n";
  EXPECT_THROW(import_trace_string(swapped), TraceError);
  const std::string skipped = head + "\n" +
      R"({"type":"event","id":0,"kind":"local","nodes":[0],"recv":[],"send":[{"id":0,"from":0,"to":1,"seq":2,"kind":"M"}]})" "\n";
  EXPECT_THROW(import_trace_string(skipped), TraceError);
  const std::string twice = head + "\n" +
      R"({"type":"event","id":0,"kind":"local","nodes":[0],"recv":[],"send":[{"id":0,"from":0,"to":1,"seq":1,"kind":"M"}]})" "\n"
      R"({"type":"event","id":1,"kind":"deliver","nodes":[1],"recv":[0],"send":[]})" "\n"
      R"({"type":"event","id":2,"kind":"deliver","nodes":[1],"recv":[0],"send":[]})" "\n";
  EXPECT_THROW(import_trace_string(twice), TraceError);
}

TEST(Budget, DefaultFormula) {
  EXPECT_EQ(default_budget(3, 1), 50u * 9 * 2);
}
