#include "lasnap/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "lasnap/adversary.hpp"
#include "lasnap/baselines.hpp"
#include "lasnap/json_io.hpp"

namespace lasnap {

namespace {

using json = nlohmann::json;

BoundSpec bound(std::string metric, std::string cmp, double value, std::string claim) {
  return BoundSpec{std::move(metric), std::move(cmp), value, 0, 0, std::move(claim)};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size() || v.front() == '-') {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return x;
}

double parse_number(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(trim(part));
  return out;
}

// node@step or node@after:KIND:count
CrashTrigger parse_crash(const std::string& v) {
  const auto at = v.find('@');
  if (at == std::string::npos) throw ConfigError("crash expects node@step or node@after:KIND:count");
  CrashTrigger c;
  c.node = static_cast<NodeId>(parse_uint("crash", trim(v.substr(0, at))));
  const auto rest = trim(v.substr(at + 1));
  if (rest.rfind("after:", 0) == 0) {
    const auto parts = split(rest.substr(6), ':');
    if (parts.size() != 2 || parts[0].empty()) {
      throw ConfigError("crash expects node@after:KIND:count, got '" + v + "'");
    }
    c.when = CrashTrigger::When::AfterSends;
    c.kind = parts[0];
    c.count = parse_uint("crash", parts[1]);
  } else {
    c.when = CrashTrigger::When::AtStep;
    c.step = parse_uint("crash", rest);
  }
  return c;
}

BoundSpec parse_bound(const std::string& v) {
  for (const char* cmp : {"<=", ">=", "=="}) {
    const auto pos = v.find(cmp);
    if (pos == std::string::npos) continue;
    BoundSpec b;
    b.metric = trim(v.substr(0, pos));
    b.cmp = cmp;
    b.value = parse_number("bound", trim(v.substr(pos + 2)));
    b.claim = "configured";
    static const std::set<std::string> metrics{"max_latency", "mean_latency", "min_latency",
                                               "completed", "target_latency", "active_faulty"};
    if (!metrics.contains(b.metric)) throw ConfigError("unknown bound metric '" + b.metric + "'");
    return b;
  }
  throw ConfigError("bound expects metric<=value, metric>=value or metric==value");
}

double limit_of(const BoundSpec& b, const ScenarioSpec& s) {
  return b.value + b.per_k * static_cast<double>(s.k) + b.per_f * static_cast<double>(s.f);
}

bool compare(double measured, const std::string& cmp, double limit) {
  if (cmp == "<=") return measured <= limit + 1e-9;
  if (cmp == ">=") return measured >= limit - 1e-9;
  return std::fabs(measured - limit) < 1e-9;
}

std::vector<NodeId> callers_of(const ScenarioSpec& s) {
  if (!s.callers.empty()) return s.callers;
  std::vector<NodeId> all(s.n);
  std::iota(all.begin(), all.end(), NodeId{0});
  return all;
}

std::vector<NodeId> faulty_tail(const ScenarioSpec& s) {
  std::vector<NodeId> out;
  for (std::size_t j = s.n - s.f; j < s.n; ++j) out.push_back(static_cast<NodeId>(j));
  return out;
}

std::vector<std::unique_ptr<Process>> make_processes(const ScenarioSpec& s, const LatticeConfig& cfg) {
  std::vector<std::unique_ptr<Process>> procs;
  for (NodeId i = 0; i < s.n; ++i) {
    switch (s.protocol) {
      case Protocol::Main:
        procs.push_back(std::make_unique<MainProcess>(i, s.n, s.f, cfg, s.mode));
        break;
      case Protocol::Faleiro:
        procs.push_back(std::make_unique<FaleiroProcess>(i, s.n, cfg));
        break;
      case Protocol::Garg:
        procs.push_back(std::make_unique<GargProcess>(i, s.n, s.f, cfg));
        break;
    }
  }
  return procs;
}

std::unique_ptr<Schedule> make_schedule(const ScenarioSpec& s) {
  switch (s.schedule) {
    case ScheduleKind::Fair:
      return std::make_unique<FairSchedule>(s.seed);
    case ScheduleKind::ContentionBurst:
      return std::make_unique<ContentionBurstSchedule>(s.seed);
    case ScheduleKind::GargHalfSplit:
      return std::make_unique<GargHalfSplitSchedule>(s.f, s.seed);
    case ScheduleKind::ActiveFaultyDelay: {
      auto faulty = faulty_tail(s);
      faulty.resize(s.k);
      return std::make_unique<ActiveFaultyDelaySchedule>(faulty, s.k, s.seed);
    }
  }
  throw std::logic_error("unhandled schedule");
}

FaultPlan make_faults(const ScenarioSpec& s) {
  FaultPlan plan;
  plan.crashes = s.crashes;
  if (s.schedule == ScheduleKind::ActiveFaultyDelay) {
    const auto faulty = faulty_tail(s);
    for (std::size_t j = s.k; j < faulty.size(); ++j) {
      plan.crashes.push_back(CrashTrigger{faulty[j], CrashTrigger::When::AtStep, 0, {}, 0});
    }
  }
  return plan;
}

void validate_spec(const ScenarioSpec& s) {
  if (s.n == 0) throw ConfigError("n must be at least 1");
  if (2 * s.f >= s.n) throw ConfigError("f must satisfy 2f < n");
  for (auto c : s.callers) {
    if (c >= s.n) throw ConfigError("caller " + std::to_string(c) + " out of range");
  }
  for (const auto& c : s.crashes) {
    if (c.node >= s.n) throw ConfigError("crash of unknown node " + std::to_string(c.node));
  }
  if (s.crashes.size() > s.f) throw ConfigError("more crashes than f");
  if (s.schedule == ScheduleKind::ActiveFaultyDelay) {
    if (s.protocol != Protocol::Main) throw ConfigError("active-faulty-delay needs the main protocol");
    if (s.k > s.f) throw ConfigError("k must not exceed f");
    if (!s.crashes.empty()) throw ConfigError("active-faulty-delay plans its own crashes");
  }
  if (s.schedule == ScheduleKind::GargHalfSplit) {
    if (s.protocol != Protocol::Garg) throw ConfigError("garg-half-split needs the garg protocol");
    if (s.f < 2 || s.f % 2 != 0 || s.n != 2 * s.f + 1) {
      throw ConfigError("garg-half-split needs an even f >= 2 and n = 2f + 1");
    }
  }
  if (s.protocol != Protocol::Main && s.mode != GuardMode::Eager) {
    throw ConfigError("deferred guards only apply to the main protocol");
  }
}

}  // namespace

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::Main:
      return "main";
    case Protocol::Faleiro:
      return "faleiro";
    case Protocol::Garg:
      return "garg";
  }
  return "?";
}

const char* to_string(ScheduleKind s) {
  switch (s) {
    case ScheduleKind::Fair:
      return "fair";
    case ScheduleKind::ContentionBurst:
      return "contention-burst";
    case ScheduleKind::GargHalfSplit:
      return "garg-half-split";
    case ScheduleKind::ActiveFaultyDelay:
      return "active-faulty-delay";
  }
  return "?";
}

const char* to_string(OpMix m) {
  switch (m) {
    case OpMix::Update:
      return "update";
    case OpMix::Snapshot:
      return "snapshot";
    case OpMix::Alternate:
      return "alternate";
    case OpMix::MwUpdate:
      return "mw";
  }
  return "?";
}

bool LatencyReport::verdicts_ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

bool LatencyReport::bounds_ok() const {
  return std::all_of(bounds.begin(), bounds.end(), [](const BoundResult& b) { return b.pass; });
}

std::vector<std::string> scenario_names() {
  return {"active-faulty-delay", "amortized",          "contention-burst",
          "crash-before-send",   "faleiro-equal-values", "faleiro-good-case",
          "garg-bad-case",       "garg-good-case",     "good-case-contention",
          "good-case-no-contention", "mw-update"};
}

ScenarioSpec named_scenario(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  if (name == "good-case-no-contention") {
    s.n = 3;
    s.f = 1;
    s.callers = {0};
    s.bounds = {bound("max_latency", "<=", 2, "completes in at most 2 rounds")};
  } else if (name == "good-case-contention") {
    s.n = 4;
    s.f = 1;
    s.ops = 20;
    s.mix = OpMix::Alternate;
    s.bounds = {bound("max_latency", "<=", 8, "at most 8 rounds to complete")};
  } else if (name == "contention-burst") {
    s.n = 4;
    s.f = 1;
    s.ops = 5;
    s.mix = OpMix::Alternate;
    s.simultaneous_start = true;
    s.schedule = ScheduleKind::ContentionBurst;
    s.bounds = {bound("max_latency", "<=", 8, "at most 8 rounds to complete")};
  } else if (name == "active-faulty-delay") {
    s.n = 7;
    s.f = 3;
    s.k = 2;
    s.schedule = ScheduleKind::ActiveFaultyDelay;
    auto b = bound("target_latency", "<=", 8, "less than 8+2k+1 rounds");
    b.per_k = 2;
    auto a = bound("active_faulty", "<=", 0, "k active faulty nodes");
    a.per_k = 1;
    s.bounds = {b, a};
  } else if (name == "amortized") {
    s.n = 5;
    s.f = 2;
    s.ops = 60;
    s.mix = OpMix::Alternate;
    s.crashes = {CrashTrigger{3, CrashTrigger::When::AtStep, 1500, {}, 0},
                 CrashTrigger{4, CrashTrigger::When::AtStep, 4000, {}, 0}};
    s.bounds = {bound("mean_latency", "<=", 8.1, "amortized time complexity of 8 rounds"),
                bound("completed", ">=", 200, "200 completed operations")};
  } else if (name == "mw-update") {
    s.n = 3;
    s.f = 1;
    s.ops = 4;
    s.mix = OpMix::MwUpdate;
  } else if (name == "crash-before-send") {
    s.n = 3;
    s.f = 1;
    s.callers = {0, 1};
    s.ops = 2;
    s.mix = OpMix::Alternate;
    s.crashes = {CrashTrigger{2, CrashTrigger::When::AtStep, 0, {}, 0}};
    s.bounds = {bound("completed", ">=", 4, "a quorum of n-f correct nodes suffices")};
  } else if (name == "faleiro-good-case") {
    s.protocol = Protocol::Faleiro;
    s.n = 3;
    s.f = 1;
    s.simultaneous_start = true;
    s.check_linearizability = false;
    s.bounds = {bound("max_latency", "<=", 6, "at most 6 rounds in the good case")};
  } else if (name == "faleiro-equal-values") {
    s.protocol = Protocol::Faleiro;
    s.n = 3;
    s.f = 1;
    s.simultaneous_start = true;
    s.equal_values = true;
    s.check_linearizability = false;
    s.bounds = {bound("max_latency", "<=", 2, "one round trip when every proposal is equal")};
  } else if (name == "garg-good-case") {
    s.protocol = Protocol::Garg;
    s.n = 3;
    s.f = 1;
    s.simultaneous_start = true;
    s.check_linearizability = false;
    s.bounds = {bound("max_latency", "<=", 2, "at most 2 rounds in the good case")};
  } else if (name == "garg-bad-case") {
    s.protocol = Protocol::Garg;
    s.f = 4;
    s.n = 9;
    s.n_from_f = true;
    s.simultaneous_start = true;
    s.schedule = ScheduleKind::GargHalfSplit;
    s.check_linearizability = false;
    auto b = bound("min_latency", ">=", 0, "takes at least f/2 rounds");
    b.per_f = 0.5;
    s.bounds = {b};
  } else {
    throw UnknownScenario("unknown scenario '" + name + "'");
  }
  return s;
}

void set_faults(ScenarioSpec& spec, std::size_t f) {
  spec.f = f;
  if (spec.n_from_f) spec.n = 2 * f + 1;
}

void apply_setting(ScenarioSpec& s, const std::string& key, const std::string& v) {
  if (key == "name") {
    s.name = v;
  } else if (key == "protocol") {
    if (v == "main") {
      s.protocol = Protocol::Main;
    } else if (v == "faleiro") {
      s.protocol = Protocol::Faleiro;
    } else if (v == "garg") {
      s.protocol = Protocol::Garg;
    } else {
      throw ConfigError("unknown protocol '" + v + "'");
    }
    if (s.protocol != Protocol::Main) s.check_linearizability = false;
  } else if (key == "n") {
    s.n = parse_uint(key, v);
    s.n_from_f = false;
  } else if (key == "f") {
    set_faults(s, parse_uint(key, v));
  } else if (key == "seed") {
    s.seed = parse_uint(key, v);
  } else if (key == "ops") {
    s.ops = parse_uint(key, v);
  } else if (key == "k") {
    s.k = parse_uint(key, v);
  } else if (key == "budget") {
    s.budget = parse_uint(key, v);
  } else if (key == "callers") {
    s.callers.clear();
    if (v != "all") {
      for (const auto& part : split(v, ',')) s.callers.push_back(static_cast<NodeId>(parse_uint(key, part)));
    }
  } else if (key == "mix") {
    if (v == "update") {
      s.mix = OpMix::Update;
    } else if (v == "snapshot") {
      s.mix = OpMix::Snapshot;
    } else if (v == "alternate") {
      s.mix = OpMix::Alternate;
    } else if (v == "mw") {
      s.mix = OpMix::MwUpdate;
    } else {
      throw ConfigError("unknown mix '" + v + "'");
    }
  } else if (key == "start") {
    if (v != "simultaneous" && v != "staggered") throw ConfigError("start is simultaneous or staggered");
    s.simultaneous_start = v == "simultaneous";
  } else if (key == "values") {
    if (v != "equal" && v != "distinct") throw ConfigError("values is equal or distinct");
    s.equal_values = v == "equal";
  } else if (key == "schedule") {
    if (v == "fair") {
      s.schedule = ScheduleKind::Fair;
    } else if (v == "contention-burst") {
      s.schedule = ScheduleKind::ContentionBurst;
    } else if (v == "garg-half-split") {
      s.schedule = ScheduleKind::GargHalfSplit;
    } else if (v == "active-faulty-delay") {
      s.schedule = ScheduleKind::ActiveFaultyDelay;
    } else {
      throw ConfigError("unknown schedule '" + v + "'");
    }
  } else if (key == "mode") {
    if (v != "eager" && v != "deferred") throw ConfigError("mode is eager or deferred");
    s.mode = v == "eager" ? GuardMode::Eager : GuardMode::Deferred;
  } else if (key == "crash") {
    s.crashes.push_back(parse_crash(v));
  } else if (key == "linearizability") {
    if (v != "on" && v != "off") throw ConfigError("linearizability is on or off");
    s.check_linearizability = v == "on";
  } else if (key == "bound") {
    s.bounds.push_back(parse_bound(v));
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

ScenarioSpec parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::string> base;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key == "scenario") {
      if (base) throw ConfigError("line " + std::to_string(lineno) + ": scenario given twice");
      base = value;
    } else {
      kv.emplace_back(std::move(key), std::move(value));
    }
  }
  ScenarioSpec spec;
  spec.name = "custom";
  if (base) spec = named_scenario(*base);
  bool custom_bounds = false;
  for (const auto& [key, value] : kv) {
    if (key == "bound" && !custom_bounds) {
      spec.bounds.clear();
      custom_bounds = true;
    }
    apply_setting(spec, key, value);
  }
  validate_spec(spec);
  return spec;
}

ScenarioSpec parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

Workload build_workload(const ScenarioSpec& s) {
  const auto cfg = LatticeConfig::square(s.n);
  Workload w;
  w.simultaneous_start = s.simultaneous_start;
  if (s.protocol != Protocol::Main) {
    for (auto c : callers_of(s)) {
      WorkItem it;
      it.node = c;
      it.kind = CallKind::Propose;
      it.value = s.equal_values ? make_update_vector(cfg, 0, 1, "x")
                                : make_update_vector(cfg, c, 1, "x" + std::to_string(c));
      w.items.push_back(std::move(it));
    }
    return w;
  }
  if (s.schedule == ScheduleKind::ActiveFaultyDelay) {
    auto faulty = faulty_tail(s);
    for (std::size_t j = 0; j < s.k; ++j) {
      w.items.push_back(WorkItem{faulty[j], CallKind::Update, faulty[j], "u" + std::to_string(faulty[j]),
                                 std::nullopt, std::nullopt, 0});
    }
    w.items.push_back(WorkItem{0, CallKind::Update, 0, "target", std::nullopt, std::nullopt, 0});
    return w;
  }
  const auto callers = callers_of(s);
  for (std::size_t k = 0; k < s.ops; ++k) {
    for (auto c : callers) {
      WorkItem it;
      it.node = c;
      const auto tag = "v" + std::to_string(c) + "." + std::to_string(k);
      switch (s.mix) {
        case OpMix::Update:
          it.kind = CallKind::Update;
          break;
        case OpMix::Snapshot:
          it.kind = CallKind::Snapshot;
          break;
        case OpMix::Alternate:
          it.kind = k % 2 == 0 ? CallKind::Update : CallKind::Snapshot;
          break;
        case OpMix::MwUpdate:
          it.kind = k % 2 == 0 ? CallKind::MwUpdate : CallKind::Snapshot;
          break;
      }
      it.reg = it.kind == CallKind::MwUpdate ? (c + k / 2) % cfg.m : c;
      if (it.kind != CallKind::Snapshot) it.arg = tag;
      w.items.push_back(std::move(it));
    }
  }
  return w;
}

std::size_t active_faulty_nodes(const ExecutionTrace& t, std::uint64_t call, std::uint64_t ret) {
  std::set<NodeId> seen;
  for (const auto& m : t.messages) {
    if (!m.delivered_at || *m.delivered_at <= call || *m.delivered_at > ret) continue;
    if (t.crashed_at.contains(m.from)) seen.insert(m.from);
  }
  return seen.size();
}

LatencyReport run_scenario(const ScenarioSpec& s) {
  validate_spec(s);
  TraceHeader header;
  header.n = s.n;
  header.f = s.f;
  header.seed = s.seed;
  header.protocol = to_string(s.protocol);
  header.label = s.name;
  header.m = s.n;

  const auto workload = build_workload(s);
  const auto faults = make_faults(s);
  auto schedule = make_schedule(s);
  Simulator sim(header, make_processes(s, header.lattice()));
  RunOptions opts;
  opts.budget = s.budget;
  auto result = run(sim, *schedule, faults, workload, opts);

  LatencyReport r;
  r.scenario = s.name;
  r.protocol = s.protocol;
  r.n = s.n;
  r.f = s.f;
  r.k = s.k;
  r.seed = s.seed;
  r.outcome = result.outcome;
  r.detail = result.detail;
  r.issued = workload.items.size();
  r.trace = std::move(result.trace);
  r.ops = operation_latencies(r.trace);

  if (!r.ops.empty()) {
    std::uint64_t sum = 0;
    r.min_latency = r.ops.front().rounds;
    for (const auto& o : r.ops) {
      r.max_latency = std::max(r.max_latency, o.rounds);
      r.min_latency = std::min(r.min_latency, o.rounds);
      sum += o.rounds;
      if (o.fallback) ++r.fallbacks;
    }
    r.mean_latency = static_cast<double>(sum) / static_cast<double>(r.ops.size());
  }
  if (s.schedule == ScheduleKind::ActiveFaultyDelay) {
    for (const auto& o : r.ops) {
      if (o.op == s.k) {
        r.target_latency = o.rounds;
        r.active_faulty = active_faulty_nodes(r.trace, o.call_event, o.return_event);
      }
    }
  }

  const auto la = check_la_properties(r.trace, true);
  r.verdicts = {la.validity, la.stability, la.consistency, la.liveness};
  if (s.protocol == Protocol::Main && s.check_linearizability) {
    const auto history = extract_history(r.trace);
    const auto lin = linearize_by_learned_order(history, r.trace);
    r.verdicts.push_back(Verdict{"linearizability", lin.ok, lin.failure, {}});
    std::size_t complete = 0;
    std::size_t incomplete = 0;
    for (const auto& op : history) {
      if (op.complete()) {
        ++complete;
      } else if (op.is_update()) {
        ++incomplete;
      }
    }
    if (complete <= kBruteForceCompleteLimit && incomplete <= kBruteForceIncompleteLimit) {
      const bool bf = brute_force_linearizable(history, r.trace.header.lattice());
      r.verdicts.push_back(Verdict{"brute-force", bf == lin.ok,
                                   bf == lin.ok ? "" : "checkers disagree", {}});
    }
  }

  for (const auto& b : s.bounds) {
    BoundResult br;
    br.bound = b;
    br.limit = limit_of(b, s);
    bool available = true;
    if (b.metric == "max_latency") {
      br.measured = static_cast<double>(r.max_latency);
      available = !r.ops.empty();
    } else if (b.metric == "min_latency") {
      br.measured = static_cast<double>(r.min_latency);
      available = !r.ops.empty();
    } else if (b.metric == "mean_latency") {
      br.measured = r.mean_latency;
      available = !r.ops.empty();
    } else if (b.metric == "completed") {
      br.measured = static_cast<double>(r.ops.size());
    } else if (b.metric == "target_latency") {
      available = r.target_latency.has_value();
      br.measured = available ? static_cast<double>(*r.target_latency) : 0;
    } else if (b.metric == "active_faulty") {
      available = r.active_faulty.has_value();
      br.measured = available ? static_cast<double>(*r.active_faulty) : 0;
    }
    br.pass = available && compare(br.measured, b.cmp, br.limit);
    r.bounds.push_back(std::move(br));
  }
  return r;
}

std::vector<LatencyReport> run_scenarios(const std::vector<ScenarioSpec>& specs) {
  std::vector<std::future<LatencyReport>> jobs;
  jobs.reserve(specs.size());
  for (const auto& s : specs) jobs.push_back(std::async(std::launch::async, run_scenario, s));
  std::vector<LatencyReport> out;
  for (auto& j : jobs) out.push_back(j.get());
  std::stable_sort(out.begin(), out.end(), [](const LatencyReport& a, const LatencyReport& b) {
    return std::tie(a.scenario, a.seed) < std::tie(b.scenario, b.seed);
  });
  return out;
}

std::string report_json(const LatencyReport& r) {
  json j;
  j["scenario"] = r.scenario;
  j["protocol"] = to_string(r.protocol);
  j["n"] = r.n;
  j["f"] = r.f;
  j["k"] = r.k;
  j["seed"] = r.seed;
  j["outcome"] = to_string(r.outcome);
  j["detail"] = r.detail;
  j["issued"] = r.issued;
  j["completed"] = r.ops.size();
  j["fallbacks"] = r.fallbacks;
  j["max_latency"] = r.max_latency;
  j["min_latency"] = r.min_latency;
  j["mean_latency"] = r.mean_latency;
  if (r.target_latency) j["target_latency"] = *r.target_latency;
  if (r.active_faulty) j["active_faulty"] = *r.active_faulty;
  j["ops"] = json::array();
  for (const auto& o : r.ops) {
    json op{{"op", o.op},
            {"node", o.node},
            {"kind", to_string(o.kind)},
            {"call_event", o.call_event},
            {"return_event", o.return_event},
            {"rounds", o.rounds},
            {"fallback", o.fallback}};
    if (o.hop_cover) op["hop_cover"] = *o.hop_cover;
    j["ops"].push_back(std::move(op));
  }
  j["verdicts"] = json::array();
  for (const auto& v : r.verdicts) {
    j["verdicts"].push_back({{"property", v.property}, {"pass", v.pass}, {"detail", v.detail},
                             {"events", v.events}});
  }
  j["bounds"] = json::array();
  for (const auto& b : r.bounds) {
    j["bounds"].push_back({{"metric", b.bound.metric}, {"cmp", b.bound.cmp}, {"limit", b.limit},
                           {"measured", b.measured}, {"pass", b.pass}, {"claim", b.bound.claim}});
  }
  return j.dump(2) + "\n";
}

std::string render_report(const LatencyReport& r) {
  std::ostringstream os;
  os << r.scenario << " protocol=" << to_string(r.protocol) << " n=" << r.n << " f=" << r.f;
  if (r.k) os << " k=" << r.k;
  os << " seed=" << r.seed << " outcome=" << to_string(r.outcome) << "\n";
  if (!r.detail.empty()) os << "  detail: " << r.detail << "\n";
  os << "  ops completed " << r.ops.size() << "/" << r.issued << ", latency max " << r.max_latency
     << " min " << r.min_latency << " mean " << std::fixed << std::setprecision(3) << r.mean_latency;
  if (r.fallbacks) os << " (" << r.fallbacks << " via IRA fallback)";
  os << "\n";
  if (r.target_latency) {
    os << "  target latency " << *r.target_latency << " with " << r.active_faulty.value_or(0)
       << " active faulty nodes\n";
  }
  for (const auto& v : r.verdicts) {
    os << "  " << (v.pass ? "ok   " : "FAIL ") << v.property;
    if (!v.pass && !v.detail.empty()) os << ": " << v.detail;
    os << "\n";
  }
  for (const auto& b : r.bounds) {
    os << "  " << (b.pass ? "ok   " : "FAIL ") << b.bound.metric << " " << b.measured << " "
       << b.bound.cmp << " " << b.limit << " (" << b.bound.claim << ")\n";
  }
  return os.str();
}

std::string emit_table(const std::vector<LatencyReport>& reports) {
  struct Cell {
    std::string measured = "-";
    std::string claimed = "-";
  };
  const std::vector<std::string> columns{"good case", "contention", "bad case", "amortized"};
  std::map<std::string, std::vector<Cell>> rows;
  for (const auto* p : {"main", "faleiro", "garg"}) rows[p].resize(columns.size());
  rows["main"][0].claimed = "2";
  rows["main"][1].claimed = "8";
  rows["main"][2].claimed = "8+2k";
  rows["main"][3].claimed = "8";
  rows["faleiro"][0].claimed = "6";
  rows["garg"][0].claimed = "2";
  rows["garg"][2].claimed = ">=f/2";

  auto fmt = [](double v) {
    std::ostringstream os;
    os << std::setprecision(3) << v;
    return os.str();
  };
  auto put = [&](const std::string& proto, std::size_t col, const std::string& v) {
    auto& cell = rows[proto][col];
    cell.measured = cell.measured == "-" ? v : cell.measured + "," + v;
  };
  for (const auto& r : reports) {
    const std::string proto = to_string(r.protocol);
    if (r.ops.empty()) continue;
    if (r.scenario == "good-case-no-contention" || r.scenario == "faleiro-good-case" ||
        r.scenario == "garg-good-case") {
      put(proto, 0, fmt(static_cast<double>(r.max_latency)));
    } else if (r.scenario == "good-case-contention" || r.scenario == "contention-burst") {
      put(proto, 1, fmt(static_cast<double>(r.max_latency)));
    } else if (r.scenario == "active-faulty-delay" && r.target_latency) {
      put(proto, 2, fmt(static_cast<double>(*r.target_latency)) + "@k=" + std::to_string(r.k));
    } else if (r.scenario == "garg-bad-case") {
      put(proto, 2, fmt(static_cast<double>(r.min_latency)) + "@f=" + std::to_string(r.f));
    } else if (r.scenario == "amortized") {
      put(proto, 3, fmt(r.mean_latency));
    }
  }

  std::vector<std::vector<std::string>> grid{{"protocol"}};
  for (const auto& c : columns) grid[0].push_back(c);
  for (const auto* p : {"main", "faleiro", "garg"}) {
    std::vector<std::string> row{p};
    for (const auto& cell : rows[p]) row.push_back(cell.measured + " (" + cell.claimed + ")");
    grid.push_back(std::move(row));
  }
  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream os;
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << std::left << std::setw(static_cast<int>(width[i]) + 2) << row[i];
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace lasnap
