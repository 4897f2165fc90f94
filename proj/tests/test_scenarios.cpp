#include <gtest/gtest.h>

#include "lasnap/scenarios.hpp"

using namespace lasnap;

TEST(Config, ParsesOverrides) {
  const auto spec = parse_config_string(R"(
# comment line
scenario = good-case-contention
n = 6          # trailing comment
seed = 9
mode = deferred
crash = 5@after:PROPOSE:2
bound = max_latency<=8
)");
  EXPECT_EQ(spec.name, "good-case-contention");
  EXPECT_EQ(spec.n, 6u);
  EXPECT_EQ(spec.seed, 9u);
  EXPECT_EQ(spec.mode, GuardMode::Deferred);
  ASSERT_EQ(spec.crashes.size(), 1u);
  EXPECT_EQ(spec.crashes[0].node, 5u);
  EXPECT_EQ(spec.crashes[0].when, CrashTrigger::When::AfterSends);
  EXPECT_EQ(spec.crashes[0].kind, "PROPOSE");
  EXPECT_EQ(spec.crashes[0].count, 2u);
  ASSERT_EQ(spec.bounds.size(), 1u);
  EXPECT_EQ(spec.bounds[0].metric, "max_latency");
  EXPECT_EQ(spec.bounds[0].cmp, "<=");
  EXPECT_EQ(spec.bounds[0].value, 8);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config_string("scenario = nope"), UnknownScenario);
  EXPECT_THROW(named_scenario("nope"), UnknownScenario);
  EXPECT_THROW(parse_config_string("colour = blue"), ConfigError);
  EXPECT_THROW(parse_config_string("n = three"), ConfigError);
  EXPECT_THROW(parse_config_string("just words"), ConfigError);
  EXPECT_THROW(parse_config_string("mix = sideways"), ConfigError);
  EXPECT_THROW(parse_config_string("crash = 1@whenever"), ConfigError);
  EXPECT_THROW(parse_config_string("bound = max_latency~3"), ConfigError);
}

TEST(Config, FaultsDeriveN) {
  auto spec = named_scenario("garg-bad-case");
  set_faults(spec, 6);
  EXPECT_EQ(spec.f, 6u);
  EXPECT_EQ(spec.n, 13u);
  auto other = named_scenario("good-case-contention");
  const auto n = other.n;
  set_faults(other, 1);
  EXPECT_EQ(other.n, n);
}

TEST(Scenarios, EveryNamedScenarioPasses) {
  std::vector<ScenarioSpec> specs;
  for (const auto& name : scenario_names()) specs.push_back(named_scenario(name));
  const auto reports = run_scenarios(specs);
  ASSERT_EQ(reports.size(), specs.size());
  for (const auto& r : reports) {
    EXPECT_TRUE(r.ok()) << render_report(r);
  }
  const auto table = emit_table(reports);
  EXPECT_NE(table.find("main"), std::string::npos);
  EXPECT_NE(table.find("faleiro"), std::string::npos);
  EXPECT_NE(table.find("garg"), std::string::npos);
}

TEST(Scenarios, DeterministicReports) {
  const auto spec = named_scenario("good-case-contention");
  const auto a = run_scenario(spec);
  const auto b = run_scenario(spec);
  EXPECT_EQ(export_trace(a.trace), export_trace(b.trace));
  EXPECT_EQ(report_json(a), report_json(b));
}

TEST(Scenarios, BoundViolationIsFlagged) {
  auto spec = named_scenario("good-case-contention");
  apply_setting(spec, "bound", "max_latency<=0");
  const auto r = run_scenario(spec);
  EXPECT_TRUE(r.live());
  EXPECT_FALSE(r.bounds_ok());
  EXPECT_FALSE(r.ok());
}

TEST(Scenarios, BudgetExhaustionIsALivenessFailure) {
  auto spec = named_scenario("good-case-contention");
  spec.budget = 10;
  const auto r = run_scenario(spec);
  EXPECT_FALSE(r.live());
  EXPECT_EQ(r.outcome, Outcome::BudgetExceeded);
}

TEST(Scenarios, WorkloadShape) {
  auto spec = named_scenario("good-case-contention");
  const auto w = build_workload(spec);
  EXPECT_EQ(w.items.size(), spec.n * spec.ops);
  spec = named_scenario("good-case-no-contention");
  EXPECT_EQ(build_workload(spec).items.size(), spec.ops);
}
