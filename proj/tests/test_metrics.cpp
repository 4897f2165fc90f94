#include <gtest/gtest.h>

#include "lasnap/metrics.hpp"
#include "lasnap/trace_gen.hpp"

using namespace lasnap;

namespace {

ExecutionTrace fixture(const std::string& name) {
  return import_trace_file(std::string(LASNAP_FIXTURES) + "/" + name + ".trace");
}

}  // namespace

TEST(Fixtures, ThreeHops) {
  const auto t = fixture("fig2");
  EXPECT_EQ(assign_ntr(t).rounds, (std::vector<std::uint64_t>{0, 1, 1, 2}));
  EXPECT_EQ(assign_ira(t).rounds, assign_ntr(t).rounds);
  EXPECT_EQ(assign_ira(t).last_round(), 2u);
  EXPECT_EQ(lcc_rounds(t), 2u);
  const auto cover = min_hop_cover(t);
  EXPECT_EQ(cover.k, 2u);
  EXPECT_TRUE(cover.exhaustive);
  EXPECT_TRUE(hops_cover(cover.hops, 0, 3));
}

TEST(Fixtures, Broadcast) {
  const auto t = fixture("fig3");
  EXPECT_EQ(assign_ntr(t).last_round(), 1u);
  EXPECT_EQ(assign_ira(t).last_round(), 1u);
  EXPECT_EQ(lcc_rounds(t), 2u);
  EXPECT_GT(lcc_rounds(t), assign_ntr(t).last_round());
}

TEST(Fixtures, Holes) {
  const auto a = fixture("fig4a");
  const auto holes = find_holes(a);
  ASSERT_EQ(holes.size(), a.events.size() - 1);
  for (std::uint64_t i = 0; i < holes.size(); ++i) {
    EXPECT_EQ(holes[i].first, i);
    EXPECT_EQ(holes[i].second, i + 1);
  }
  EXPECT_NO_THROW(assign_ira(a));

  const auto b = fixture("fig4b");
  EXPECT_EQ(find_holes(b), (std::vector<std::pair<std::uint64_t, std::uint64_t>>{{1, 2}}));
  EXPECT_THROW(assign_ntr(b), CoveredRequired);
  EXPECT_THROW(min_hop_cover(b), CoveredRequired);
  try {
    assign_ntr(b);
  } catch (const CoveredRequired& e) {
    EXPECT_EQ(e.left, 1u);
    EXPECT_EQ(e.right, 2u);
  }

  const auto c = fixture("fig4c");
  EXPECT_TRUE(find_holes(c).empty());
  EXPECT_TRUE(is_covered(c));
  EXPECT_EQ(assign_ntr(c).last_round(), 3u);
  EXPECT_EQ(min_hop_cover(c).k, 3u);
}

TEST(Fixtures, BetweenEvents) {
  const auto t = fixture("fig5");
  EXPECT_EQ(latency_between(t, 1, 3), 2u);
  EXPECT_EQ(naive_ntr_difference(t, 1, 3), 1);
  EXPECT_EQ(min_hop_cover_between(t, 1, 3).k, 2u);
  EXPECT_EQ(latency_between(t, 2, 2), 0u);
  EXPECT_EQ(assign_ntr(t).last_round(), 2u);
  EXPECT_EQ(lcc_rounds(t), 2u);
}

TEST(Degenerate, SingleEventAndNoMessages) {
  ExecutionTrace t;
  t.header.n = 2;
  t.events.push_back(Event{0, "local", {0}, {}, {}, {}, {}, {}, {}});
  EXPECT_EQ(assign_ira(t).rounds, (std::vector<std::uint64_t>{0}));
  EXPECT_EQ(assign_ntr(t).rounds, (std::vector<std::uint64_t>{0}));
  EXPECT_EQ(min_hop_cover(t).k, 0u);
  t.events.push_back(Event{1, "local", {1}, {}, {}, {}, {}, {}, {}});
  EXPECT_EQ(assign_lcc(t).rounds, (std::vector<std::uint64_t>{1, 1}));
  EXPECT_EQ(lcc_rounds(t), 0u);
}

TEST(HopsCover, Intervals) {
  EXPECT_TRUE(hops_cover({{0, 2}, {1, 4}}, 0, 4));
  EXPECT_FALSE(hops_cover({{0, 1}, {2, 4}}, 0, 4));
  EXPECT_TRUE(hops_cover({}, 3, 3));
}

// Properties over a random corpus, holes allowed where the metric allows them.
TEST(Properties, RandomCorpus) {
  std::size_t covered = 0;
  std::size_t lcc_above = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto t = random_trace(seed);
    ASSERT_NO_THROW(validate_trace(t));
    const auto ira = assign_ira(t);
    ASSERT_EQ(ira.rounds.size(), t.events.size());
    for (std::size_t i = 1; i < ira.rounds.size(); ++i) ASSERT_LE(ira.rounds[i - 1], ira.rounds[i]);
    for (const auto& e : t.events) {
      const auto src = source_events(t, e);
      if (!src.empty()) {
        ASSERT_LE(ira.rounds[e.id], ira.rounds[src.front()] + 1) << "seed " << seed;
      }
    }
    const auto lcc = assign_lcc(t);
    for (const auto& e : t.events) {
      for (auto s : source_events(t, e)) ASSERT_GT(lcc.rounds[e.id], lcc.rounds[s]);
    }
    if (!is_covered(t)) {
      EXPECT_FALSE(find_holes(t).empty());
      continue;
    }
    ++covered;
    const auto ntr = assign_ntr(t);
    ASSERT_EQ(ira.rounds, ntr.rounds) << "seed " << seed;
    ASSERT_EQ(ntr.last_round(), min_hop_cover(t).k) << "seed " << seed;
    if (lcc_rounds(t) > ntr.last_round()) ++lcc_above;
  }
  EXPECT_GT(covered, 50u);
  EXPECT_GT(lcc_above, 0u);
}

TEST(Latencies, OperationsOnFixture) {
  // Fixtures carry no calls, so there is nothing to measure.
  EXPECT_TRUE(operation_latencies(fixture("fig2")).empty());
}
