#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lasnap/checkers.hpp"
#include "lasnap/metrics.hpp"
#include "lasnap/sim.hpp"

namespace lasnap {

class UnknownScenario : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Protocol : std::uint8_t { Main, Faleiro, Garg };
enum class ScheduleKind : std::uint8_t { Fair, ContentionBurst, GargHalfSplit, ActiveFaultyDelay };
/// Operation pattern of each caller in the main protocol.
enum class OpMix : std::uint8_t { Update, Snapshot, Alternate, MwUpdate };

const char* to_string(Protocol p);
const char* to_string(ScheduleKind s);
const char* to_string(OpMix m);

/// `metric cmp value + per_k * k + per_f * f`.
struct BoundSpec {
  std::string metric;  // max_latency, mean_latency, min_latency, completed, target_latency, active_faulty
  std::string cmp;     // <=, >=, ==
  double value = 0;
  double per_k = 0;
  double per_f = 0;
  std::string claim;
};

struct ScenarioSpec {
  std::string name;
  Protocol protocol = Protocol::Main;
  std::size_t n = 3;
  std::size_t f = 1;
  std::uint64_t seed = 1;
  std::size_t ops = 1;           // per caller
  std::vector<NodeId> callers;   // empty: every node
  OpMix mix = OpMix::Update;
  bool simultaneous_start = false;
  bool equal_values = false;     // one-shot protocols: every node proposes the same value
  ScheduleKind schedule = ScheduleKind::Fair;
  std::size_t k = 0;             // active faulty nodes
  GuardMode mode = GuardMode::Eager;
  std::vector<CrashTrigger> crashes;
  std::uint64_t budget = 0;
  bool n_from_f = false;         // n = 2f + 1 when f is overridden
  bool check_linearizability = true;
  std::vector<BoundSpec> bounds;
};

struct BoundResult {
  BoundSpec bound;
  double limit = 0;
  double measured = 0;
  bool pass = false;
};

struct LatencyReport {
  std::string scenario;
  Protocol protocol = Protocol::Main;
  std::size_t n = 0;
  std::size_t f = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::Completed;
  std::string detail;

  std::vector<OpLatency> ops;
  std::size_t issued = 0;
  std::size_t fallbacks = 0;
  std::uint64_t max_latency = 0;
  std::uint64_t min_latency = 0;
  double mean_latency = 0;
  std::optional<std::uint64_t> target_latency;
  std::optional<std::size_t> active_faulty;

  std::vector<Verdict> verdicts;
  std::vector<BoundResult> bounds;
  ExecutionTrace trace;

  bool live() const { return outcome == Outcome::Completed; }
  bool verdicts_ok() const;
  bool bounds_ok() const;
  bool ok() const { return live() && verdicts_ok() && bounds_ok(); }
};

std::vector<std::string> scenario_names();
/// Throws UnknownScenario.
ScenarioSpec named_scenario(const std::string& name);

/// Plain-text `key = value` lines; `#` starts a comment. A `scenario` key
/// selects the base spec, every other key overrides it. Throws ConfigError
/// or UnknownScenario.
ScenarioSpec parse_config(std::istream& in);
ScenarioSpec parse_config_string(const std::string& text);
/// Applies one key/value pair to a spec. Throws ConfigError.
void apply_setting(ScenarioSpec& spec, const std::string& key, const std::string& value);
/// Sets f and, when the spec asks for it, n = 2f + 1.
void set_faults(ScenarioSpec& spec, std::size_t f);

Workload build_workload(const ScenarioSpec& spec);
LatencyReport run_scenario(const ScenarioSpec& spec);
/// Runs the specs on worker threads; reports come back sorted by name, then seed.
std::vector<LatencyReport> run_scenarios(const std::vector<ScenarioSpec>& specs);

/// Distinct crashed nodes with a message received in (call, ret].
std::size_t active_faulty_nodes(const ExecutionTrace& t, std::uint64_t call, std::uint64_t ret);

std::string report_json(const LatencyReport& r);
std::string render_report(const LatencyReport& r);
/// Protocols by rows; good case without and with contention, bad case and
/// amortized by columns. Cells show "measured (claimed)".
std::string emit_table(const std::vector<LatencyReport>& reports);

}  // namespace lasnap
