#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lasnap/checkers.hpp"
#include "lasnap/fuzz.hpp"
#include "lasnap/metrics.hpp"
#include "lasnap/scenarios.hpp"
#include "lasnap/trace_gen.hpp"

using namespace lasnap;

namespace {

enum Exit : int { kOk = 0, kViolation = 1, kUnknownScenario = 2, kMalformed = 3, kLiveness = 4 };

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int exit_for(const LatencyReport& r) {
  if (!r.live()) return kLiveness;
  return r.ok() ? kOk : kViolation;
}

struct RunArgs {
  std::string scenario;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<std::size_t> f;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> budget;
  std::string trace_out;
  std::string report_out;
};

int cmd_run(const RunArgs& a) {
  if (a.scenario.empty() && a.config.empty()) {
    std::vector<ScenarioSpec> specs;
    for (const auto& name : scenario_names()) {
      auto s = named_scenario(name);
      if (a.seed) s.seed = *a.seed;
      specs.push_back(std::move(s));
    }
    const auto reports = run_scenarios(specs);
    int code = kOk;
    for (const auto& r : reports) {
      std::cout << render_report(r);
      code = std::max(code, exit_for(r) == kLiveness ? kLiveness : exit_for(r));
    }
    std::cout << "\n" << emit_table(reports);
    return code;
  }

  ScenarioSpec spec;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw ConfigError("cannot open config " + a.config);
    spec = parse_config(in);
  } else {
    spec = named_scenario(a.scenario);
  }
  if (!a.scenario.empty() && !a.config.empty() && spec.name != a.scenario) {
    throw ConfigError("config describes '" + spec.name + "', not '" + a.scenario + "'");
  }
  if (a.f) set_faults(spec, *a.f);
  if (a.n) spec.n = *a.n;
  if (a.seed) spec.seed = *a.seed;
  if (a.k) spec.k = *a.k;
  if (a.budget) spec.budget = *a.budget;

  const auto r = run_scenario(spec);
  std::cout << render_report(r);
  if (!a.trace_out.empty()) write_file(a.trace_out, export_trace(r.trace));
  if (!a.report_out.empty()) write_file(a.report_out, report_json(r));
  return exit_for(r);
}

int cmd_list() {
  for (const auto& name : scenario_names()) {
    const auto s = named_scenario(name);
    std::cout << name << "  protocol=" << to_string(s.protocol) << " n=" << s.n << " f=" << s.f
              << " schedule=" << to_string(s.schedule);
    for (const auto& b : s.bounds) {
      std::cout << "  " << b.metric << b.cmp;
      if (b.value != 0 || (b.per_k == 0 && b.per_f == 0)) std::cout << b.value;
      if (b.per_k != 0) std::cout << (b.value != 0 ? "+" : "") << (b.per_k == 1 ? "" : std::to_string(static_cast<int>(b.per_k))) << "k";
      if (b.per_f != 0) std::cout << (b.per_f == 0.5 ? "f/2" : std::to_string(b.per_f) + "f");
    }
    std::cout << "\n";
  }
  return kOk;
}

std::string rounds_row(const std::vector<std::uint64_t>& r) {
  std::ostringstream os;
  for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << r[i];
  return os.str();
}

int cmd_metrics(const std::string& path, const std::string& report_out) {
  const auto t = import_trace_file(path);
  const auto ira = assign_ira(t);
  const auto lcc = assign_lcc(t);
  const auto holes = find_holes(t);
  nlohmann::json j;
  j["events"] = t.events.size();
  j["ira"] = ira.rounds;
  j["lcc"] = lcc.rounds;
  j["lcc_rounds"] = lcc_rounds(t);
  j["holes"] = holes;

  std::cout << "events " << t.events.size() << "\n";
  std::cout << "IRA rounds " << ira.last_round() << "   by event: " << rounds_row(ira.rounds) << "\n";
  if (holes.empty()) {
    const auto ntr = assign_ntr(t);
    const auto cover = min_hop_cover(t);
    j["ntr"] = ntr.rounds;
    j["hop_cover"] = cover.k;
    std::cout << "NTR rounds " << ntr.last_round() << "   by event: " << rounds_row(ntr.rounds) << "\n";
    std::cout << "min hop cover " << cover.k << (cover.exhaustive ? " (exhaustive)" : " (greedy)") << ":";
    for (const auto& h : cover.hops) std::cout << " e" << h.from << "->e" << h.to;
    std::cout << "\n";
    std::cout << "IRA/NTR/LCC = " << ira.last_round() << "/" << ntr.last_round() << "/" << lcc_rounds(t)
              << "\n";
  } else {
    std::cout << "NTR undefined, holes at:";
    for (const auto& [l, r] : holes) std::cout << " (e" << l << ",e" << r << ")";
    std::cout << "\n";
  }
  std::cout << "LCC chain " << lcc_rounds(t) << "   by event: " << rounds_row(lcc.rounds) << "\n";
  for (const auto& o : operation_latencies(t, holes.empty())) {
    std::cout << "op " << o.op << " node " << o.node << " " << to_string(o.kind) << " e" << o.call_event
              << "..e" << o.return_event << " rounds " << o.rounds << (o.fallback ? " (IRA fallback)" : "")
              << "\n";
  }
  if (!report_out.empty()) write_file(report_out, j.dump(2) + "\n");
  return kOk;
}

int cmd_check(const std::string& path, bool fair) {
  const auto t = import_trace_file(path);
  const auto la = check_la_properties(t, fair);
  bool ok = true;
  auto show = [&](const Verdict& v) {
    ok = ok && v.pass;
    std::cout << (v.pass ? "ok   " : "FAIL ") << v.property;
    if (!v.pass) {
      std::cout << ": " << v.detail;
      for (auto e : v.events) std::cout << " e" << e;
    }
    std::cout << "\n";
  };
  show(la.validity);
  show(la.stability);
  show(la.consistency);
  if (fair) show(la.liveness);
  const auto h = extract_history(t);
  if (!h.empty()) {
    const auto lin = linearize_by_learned_order(h, t);
    show(Verdict{"linearizability", lin.ok, lin.failure, {}});
    for (auto op : lin.lin.excluded) std::cout << "     excluded unsuccessful update op " << op << "\n";
  }
  return ok ? kOk : kViolation;
}

int cmd_fuzz(const std::string& kind, std::uint64_t from, std::uint64_t count, const std::string& out_dir) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  std::size_t bad = 0;
  for (std::uint64_t seed = from; seed < from + count; ++seed) {
    ExecutionTrace t;
    std::string problem;
    if (kind == "trace") {
      auto c = random_covered_trace(seed);
      if (!c) continue;
      t = std::move(*c);
      const auto ntr = assign_ntr(t);
      if (assign_ira(t).rounds != ntr.rounds) problem = "IRA and NTR differ";
      if (min_hop_cover(t).k != ntr.last_round()) problem = "hop cover differs from NTR";
    } else if (kind == "la" || kind == "aso") {
      auto run = kind == "la" ? fuzz_la_run(seed) : fuzz_aso_run(seed);
      t = std::move(run.result.trace);
      const auto la = check_la_properties(t, run.fair);
      if (!la.all(run.fair)) problem = "agreement property violated";
      if (run.fair && run.result.outcome != Outcome::Completed) problem = to_string(run.result.outcome);
      if (kind == "aso") {
        const auto lin = linearize_by_learned_order(extract_history(t), t);
        if (!lin.ok) problem = lin.failure;
      }
    } else {
      throw ConfigError("fuzz kind is trace, la or aso");
    }
    if (!problem.empty()) {
      ++bad;
      std::cout << "seed " << seed << ": " << problem << "\n";
    }
    if (!out_dir.empty()) {
      write_file(out_dir + "/" + kind + "-" + std::to_string(seed) + ".trace", export_trace(t));
    }
  }
  std::cout << count << " " << kind << " seeds from " << from << ", " << bad << " failing\n";
  return bad ? kViolation : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice-agreement snapshot simulator"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "run a named scenario, a config file, or every scenario");
  run->add_option("scenario,--scenario", ra.scenario, "scenario name");
  run->add_option("--config", ra.config, "key = value scenario file");
  run->add_option("--seed", ra.seed);
  run->add_option("--n", ra.n);
  run->add_option("--f", ra.f);
  run->add_option("--k", ra.k, "active faulty nodes");
  run->add_option("--budget", ra.budget, "step budget");
  run->add_option("--trace-out", ra.trace_out);
  run->add_option("--report-out", ra.report_out);

  auto* list = app.add_subcommand("list", "list scenarios");

  std::string trace_path;
  std::string report_out;
  auto* metrics = app.add_subcommand("metrics", "round metrics of a trace file");
  metrics->add_option("--trace", trace_path)->required();
  metrics->add_option("--report-out", report_out);

  bool unfair = false;
  auto* check = app.add_subcommand("check", "agreement and linearizability verdicts for a trace");
  check->add_option("--trace", trace_path)->required();
  check->add_flag("--unfair", unfair, "skip liveness");

  std::string kind = "trace";
  std::uint64_t from = 0;
  std::uint64_t count = 100;
  std::string out_dir;
  auto* fuzz = app.add_subcommand("fuzz", "generate and check a seeded corpus");
  fuzz->add_option("--kind", kind, "trace, la or aso");
  fuzz->add_option("--from", from, "first seed");
  fuzz->add_option("--count", count, "number of seeds");
  fuzz->add_option("--out-dir", out_dir, "write every trace here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kMalformed;
  }

  try {
    if (*run) return cmd_run(ra);
    if (*list) return cmd_list();
    if (*metrics) return cmd_metrics(trace_path, report_out);
    if (*check) return cmd_check(trace_path, !unfair);
    if (*fuzz) return cmd_fuzz(kind, from, count, out_dir);
  } catch (const UnknownScenario& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnknownScenario;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  } catch (const TraceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  } catch (const CoveredRequired& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  }
  return kOk;
}
