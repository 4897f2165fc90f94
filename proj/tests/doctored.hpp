#pragma once

// Hand-tampered traces used as negative controls for the checkers.

#include <stdexcept>

#include "lasnap/checkers.hpp"
#include "lasnap/sim.hpp"

namespace doctored {

/// Node 0 writes "v"; then node 1 and node 2 each take a snapshot, in
/// sequence. All three complete.
inline lasnap::ExecutionTrace update_then_two_snapshots(std::uint64_t seed = 3) {
  using namespace lasnap;
  const auto cfg = LatticeConfig::square(3, "init");
  Workload w;
  w.items.push_back(WorkItem{0, CallKind::Update, 0, "v", {}, {}, 0});
  w.items.push_back(WorkItem{1, CallKind::Snapshot, 0, {}, {}, 0, 0});
  w.items.push_back(WorkItem{2, CallKind::Snapshot, 0, {}, {}, 1, 0});
  Simulator sim(TraceHeader{1, 3, 1, seed, "main", "doctored", 3, "init"},
                make_main_processes(3, 1, cfg));
  FairSchedule sched(seed);
  auto r = run(sim, sched, {}, w);
  if (r.outcome != Outcome::Completed) throw std::runtime_error("control run did not complete");
  return std::move(r.trace);
}

inline lasnap::ReplyRecord& reply(lasnap::ExecutionTrace& t, std::uint64_t op) {
  for (auto& e : t.events) {
    for (auto& r : e.replies) {
      if (r.op == op) return r;
    }
  }
  throw std::runtime_error("no reply for op");
}

/// A learn incomparable with the honest ones.
inline lasnap::ExecutionTrace incomparable_learn() {
  using namespace lasnap;
  auto t = update_then_two_snapshots();
  const auto bogus = make_update_vector(t.header.lattice(), 1, 99, "zz");
  t.events.back().learns.push_back(LearnRecord{t.events.back().nodes.front(), bogus, {}});
  return t;
}

/// The later snapshot misses the write the earlier one saw.
inline lasnap::ExecutionTrace classic_read_pair() {
  using namespace lasnap;
  auto t = update_then_two_snapshots();
  auto& r = reply(t, 2);
  r.result[0] = "init";
  r.witness = make_snapshot_vector(t.header.lattice(), 2, 1);
  return t;
}

/// A snapshot returns a payload that no update wrote.
inline lasnap::ExecutionTrace ghost_value() {
  auto t = update_then_two_snapshots();
  reply(t, 1).result[1] = "ghost";
  return t;
}

}  // namespace doctored
