#include "lasnap/fuzz.hpp"

#include <random>

#include "lasnap/adversary.hpp"

namespace lasnap {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::unique_ptr<Schedule> pick_schedule(std::mt19937_64& rng, std::size_t n, bool* fair) {
  *fair = rng() % 2 == 0;
  if (*fair) return std::make_unique<FairSchedule>(rng());
  std::set<NodeId> victims;
  for (NodeId j = 0; j < n; ++j) {
    if (rng() % 3 == 0) victims.insert(j);
  }
  return std::make_unique<StarveSchedule>(rng(), std::move(victims));
}

FaultPlan pick_faults(std::mt19937_64& rng, std::size_t n, std::size_t f, std::size_t max_crashes) {
  FaultPlan plan;
  const auto crashes = pick(rng, 0, std::min(f, max_crashes));
  std::vector<NodeId> nodes(n);
  for (NodeId j = 0; j < n; ++j) nodes[j] = j;
  std::shuffle(nodes.begin(), nodes.end(), rng);
  for (std::size_t c = 0; c < crashes; ++c) {
    CrashTrigger t;
    t.node = nodes[c];
    if (rng() % 2 == 0) {
      t.when = CrashTrigger::When::AtStep;
      t.step = pick(rng, 0, 40);
    } else {
      t.when = CrashTrigger::When::AfterSends;
      t.kind = rng() % 2 == 0 ? "PROPOSE" : "ACCEPT";
      t.count = pick(rng, 1, n);
    }
    plan.crashes.push_back(std::move(t));
    if (rng() % 3 == 0) plan.deliver_from_crashed.insert(nodes[c]);
  }
  return plan;
}

}  // namespace

AsoVector random_vector(std::uint64_t seed, const LatticeConfig& cfg) {
  std::mt19937_64 rng(seed);
  std::vector<RegisterCell> cells;
  for (std::size_t i = 0; i < cfg.m; ++i) {
    const auto w = pick(rng, 0, 3);
    cells.push_back(RegisterCell{w, w == 0 ? cfg.initial_payload : std::string(1, static_cast<char>('a' + rng() % 3))});
  }
  std::vector<std::uint64_t> counters;
  for (std::size_t i = 0; i < cfg.n; ++i) counters.push_back(pick(rng, 0, 2));
  return AsoVector(std::move(cells), std::move(counters));
}

FuzzRun fuzz_la_run(std::uint64_t seed, std::size_t max_n) {
  std::mt19937_64 rng(seed);
  FuzzRun out;
  out.seed = seed;
  const auto n = pick(rng, 1, max_n);
  const auto f = pick(rng, 0, (n - 1) / 2);
  const auto mode = rng() % 3 == 0 ? GuardMode::Deferred : GuardMode::Eager;
  TraceHeader header;
  header.n = n;
  header.f = f;
  header.seed = seed;
  header.protocol = "main";
  header.label = "fuzz-la";
  header.m = pick(rng, 1, 3);
  const auto cfg = header.lattice();

  Workload w;
  w.simultaneous_start = rng() % 4 == 0;
  const auto calls = pick(rng, 1, 2 * n);
  for (std::size_t c = 0; c < calls; ++c) {
    WorkItem it;
    it.node = static_cast<NodeId>(pick(rng, 0, n - 1));
    it.kind = CallKind::Propose;
    it.value = random_vector(rng(), cfg);
    it.not_before_step = pick(rng, 0, 10);
    w.items.push_back(std::move(it));
  }
  auto faults = pick_faults(rng, n, f, f);
  auto schedule = pick_schedule(rng, n, &out.fair);
  Simulator sim(header, make_main_processes(n, f, cfg, mode));
  out.result = run(sim, *schedule, faults, w);
  return out;
}

FuzzRun fuzz_aso_run(std::uint64_t seed, std::size_t max_n, std::size_t max_ops) {
  std::mt19937_64 rng(seed);
  FuzzRun out;
  out.seed = seed;
  const auto n = pick(rng, 2, std::max<std::size_t>(2, max_n));
  const auto f = pick(rng, 0, (n - 1) / 2);
  const auto mode = rng() % 4 == 0 ? GuardMode::Deferred : GuardMode::Eager;
  TraceHeader header;
  header.n = n;
  header.f = f;
  header.seed = seed;
  header.protocol = "main";
  header.label = "fuzz-aso";
  header.m = n;
  const auto cfg = header.lattice();

  // Single-writer updates assume nobody else writes their register, so a run
  // uses one discipline only.
  const bool multi_writer = rng() % 2 == 0;
  Workload w;
  const auto ops = pick(rng, 1, max_ops);
  for (std::size_t k = 0; k < ops; ++k) {
    WorkItem it;
    it.node = static_cast<NodeId>(pick(rng, 0, n - 1));
    if (rng() % 2 == 0) {
      it.kind = CallKind::Snapshot;
    } else if (multi_writer) {
      it.kind = CallKind::MwUpdate;
      it.reg = pick(rng, 0, n - 1);
    } else {
      it.kind = CallKind::Update;
      it.reg = it.node;
    }
    if (it.kind != CallKind::Snapshot) it.arg = "v" + std::to_string(k);
    it.not_before_step = pick(rng, 0, 20);
    w.items.push_back(std::move(it));
  }
  auto faults = pick_faults(rng, n, f, 1);
  auto schedule = pick_schedule(rng, n, &out.fair);
  Simulator sim(header, make_main_processes(n, f, cfg, mode));
  out.result = run(sim, *schedule, faults, w);
  return out;
}

}  // namespace lasnap
